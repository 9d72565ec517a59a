"""Check the channel model against textbook expectations.

Draws a few thousand small-scale fading realizations and compares the
envelope statistics with the Rayleigh/Rician formulas, then tabulates
median path loss over distance for both loss models.
"""

import numpy as np

from ismsim import ChannelConfig, draw_channel
from ismsim.channel import path_loss_lognormal, tap_powers


def envelope_stats(cfg, n=4000):
    env = np.empty(n)
    for i in range(n):
        real = draw_channel(cfg, distance_m=5.0, seed=i)
        env[i] = abs(real.gains[0])
    return env


def main():
    rayleigh = ChannelConfig(model="rayleigh")
    rician = ChannelConfig(model="rician", k_factor=5.0)
    p0 = tap_powers(rayleigh)[0]

    env = envelope_stats(rayleigh)
    sigma = np.sqrt(p0 / 2)
    print("Rayleigh first tap, 4000 draws")
    print(f"  mean |h|: {env.mean():.4f}   theory {sigma * np.sqrt(np.pi / 2):.4f}")
    print(f"  rms  |h|: {np.sqrt((env ** 2).mean()):.4f}   theory {np.sqrt(p0):.4f}")

    env = envelope_stats(rician)
    k = rician.k_factor
    # Rician mean via the Laguerre polynomial of order 1/2
    from scipy.special import i0, i1
    s = np.sqrt(p0 / (2 * (k + 1)))
    mean = s * np.sqrt(np.pi / 2) * np.exp(-k / 2) * (
        (1 + k) * i0(k / 2) + k * i1(k / 2))
    print(f"\nRician first tap, K = {k:.0f} (linear ratio)")
    print(f"  mean |h|: {env.mean():.4f}   theory {mean:.4f}")

    print("\nMedian path loss over distance (2.44 GHz)")
    print(f"  {'d [m]':>6}  {'log-normal n=2.5':>18}  {'indoor wlan':>12}")
    for d in (1, 2, 5, 10, 20):
        samples = [path_loss_lognormal(d, 2.5, 4.0, seed=s)
                   for s in range(400)]
        wlan = 32.4 + 17.3 * np.log10(d) + 20 * np.log10(2.44)
        print(f"  {d:6.0f}  {np.median(samples):15.1f} dB  {wlan:9.1f} dB")


if __name__ == "__main__":
    main()
