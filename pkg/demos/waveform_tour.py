"""Walk through the four transmitter models one at a time.

Each technology is synthesized at the full 80 MHz band rate over a 20 ms
span, and the script reports what actually went out on the air: how many
bursts, where they sit in time and frequency, and how wide the signal
really is compared with the nominal channel width.
"""

import numpy as np

from ismsim import Technology, generate, spec_for
from ismsim.waveforms import NOMINAL_BANDWIDTH_HZ


def occupied_bandwidth(sig, fraction=0.99):
    """Measured bandwidth containing `fraction` of the signal power."""
    spectrum = np.abs(np.fft.fftshift(np.fft.fft(sig.samples))) ** 2
    order = np.argsort(spectrum)[::-1]
    cum = np.cumsum(spectrum[order])
    n_bins = int(np.searchsorted(cum, fraction * cum[-1])) + 1
    return n_bins * sig.sample_rate / len(spectrum)


def main():
    for tech in (Technology.WLAN, Technology.BLUETOOTH,
                 Technology.ZIGBEE, Technology.SMARTBAN):
        spec = spec_for(tech)
        sig, events = generate(spec, seed=7)

        power_mw = np.mean(np.abs(sig.samples) ** 2)
        duty = sum(e.t_end - e.t_start for e in events) / 20e-3
        bw99 = occupied_bandwidth(sig)

        print(f"\n{tech.name}")
        print(f"  bursts:              {len(events)}")
        print(f"  duty cycle:          {duty * 100:.1f} %")
        print(f"  mean power:          {10 * np.log10(power_mw):+.1f} dBm")
        print(f"  nominal bandwidth:   {NOMINAL_BANDWIDTH_HZ[tech] / 1e6:.1f} MHz")
        # aggregate over the whole span, so a hopper shows its hop range
        print(f"  99% occupied bw:     {bw99 / 1e6:.2f} MHz")

        first = events[0]
        print(f"  first burst:         {first.t_start * 1e3:.3f} to "
              f"{first.t_end * 1e3:.3f} ms, "
              f"{first.f_low / 1e6:+.1f} to {first.f_high / 1e6:+.1f} MHz")


if __name__ == "__main__":
    main()
