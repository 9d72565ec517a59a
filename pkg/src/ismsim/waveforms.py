"""Complex-baseband burst generators for the 2.4 GHz coexistence band.

Everything is generated in a single 80 MHz observation window centered on
2.44 GHz, so baseband frequencies run from -40 to +40 MHz. Four transmitter
types are modelled:

* Wi-Fi: simplified 20 MHz OFDM (312.5 kHz spacing, 52 occupied bins,
  quarter-length cyclic prefix), 180 us packets with a fixed 20 us idle.
* Bluetooth: GFSK, BT 0.5, modulation index 0.32, 625 us slots; each active
  slot group hops to a random 1 MHz channel.
* ZigBee: half-sine O-QPSK at 4 Mchip/s, 4.2565 ms packets separated by
  U(0, 5) us idle gaps.
* SmartBAN: Gaussian-shaped FSK at 1 Msym/s in a 2 MHz channel, 1.25 ms
  slots sent back to back in one window per span at a random start.

Amplitudes are in sqrt-milliwatt units: |x|^2 is instantaneous power in mW,
so a 0 dBm burst has unit envelope. Generators return the waveform plus the
list of time/frequency rectangles (`BurstEvent`) that ground-truth labelling
is built from.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Callable

import numpy as np
from scipy.signal import fftconvolve

# ---------------------------------------------------------------------------
# band constants

BAND_CENTER_HZ = 2.44e9
DEFAULT_SAMPLE_RATE = 80e6
DEFAULT_TIME_SPAN = 20e-3


class Technology(IntEnum):
    """Transmitter classes; the enum value doubles as the label-mask code."""

    UNKNOWN = 0
    WLAN = 16
    BLUETOOTH = 32
    ZIGBEE = 64
    SMARTBAN = 128


# mask merge order, strongest claim first
PRIORITY_ORDER = (
    Technology.BLUETOOTH,
    Technology.SMARTBAN,
    Technology.ZIGBEE,
    Technology.WLAN,
    Technology.UNKNOWN,
)

# canonical class order for confusion matrices and reports
CLASS_ORDER = (
    Technology.UNKNOWN,
    Technology.WLAN,
    Technology.BLUETOOTH,
    Technology.ZIGBEE,
    Technology.SMARTBAN,
)

NOMINAL_BANDWIDTH_HZ = {
    Technology.WLAN: 20e6,
    Technology.BLUETOOTH: 1e6,
    Technology.ZIGBEE: 4e6,
    Technology.SMARTBAN: 2e6,
}

DEFAULT_TX_POWER_DBM = {
    Technology.WLAN: 20.0,
    Technology.BLUETOOTH: 10.0,
    Technology.ZIGBEE: 0.0,
    Technology.SMARTBAN: 0.0,
}

# per-technology frame parameters
BLUETOOTH_SYMBOL_RATE = 1e6
BLUETOOTH_SLOT_S = 625e-6
BLUETOOTH_MOD_INDEX = 0.32
ZIGBEE_CHIP_RATE = 4e6
ZIGBEE_PACKET_S = 4.2565e-3
ZIGBEE_GAP_MAX_S = 5e-6
WLAN_PACKET_S = 180e-6
WLAN_IDLE_S = 20e-6
WLAN_OCCUPIED_BINS = 52
WLAN_FFT = 256  # at 80 MHz this gives the 312.5 kHz OFDM spacing
WLAN_CP = WLAN_FFT // 4
SMARTBAN_SYMBOL_RATE = 1e6
SMARTBAN_SLOT_S = 1.25e-3
# Wider deviation than classic GMSK (h = 0.5) so the occupied bandwidth
# genuinely fills the 2 MHz SmartBAN channel that the ground truth records.
SMARTBAN_MOD_INDEX = 1.0
GAUSSIAN_BT = 0.5

# Bluetooth hop channels: 2402..2479 MHz, i.e. offsets -38..+39 MHz, keeping
# the 1 MHz channel fully inside the +/-40 MHz window.
BLUETOOTH_HOP_MIN_MHZ = -38
BLUETOOTH_HOP_MAX_MHZ = 39


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class BurstEvent:
    """One transmission rectangle in the time/frequency plane."""

    technology: Technology
    t_start: float  # seconds from span start
    t_end: float
    f_low: float  # Hz relative to band center
    f_high: float

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start

    @property
    def bandwidth(self) -> float:
        return self.f_high - self.f_low


@dataclass
class ComplexSignal:
    """Sampled complex baseband, |samples|^2 in mW."""

    sample_rate: float
    samples: np.ndarray

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate


@dataclass(frozen=True)
class WaveformSpec:
    technology: Technology
    symbol_rate: float  # symbols or chips per second
    burst_duration: float  # one slot or packet, seconds
    idle_range: tuple[float, float]  # min/max idle between bursts
    sample_rate: float = DEFAULT_SAMPLE_RATE
    time_span: float = DEFAULT_TIME_SPAN
    slot_count: int = 1  # slots per transmission (Bluetooth, SmartBAN)
    center_offset_hz: float = 0.0  # channel center relative to band center
    tx_power_dbm: float = 0.0

    def __post_init__(self):
        if self.sample_rate <= 0 or self.symbol_rate <= 0:
            raise ValueError("sample_rate and symbol_rate must be positive")
        if self.time_span <= 0 or self.burst_duration <= 0:
            raise ValueError("time_span and burst_duration must be positive")
        if self.slot_count < 1:
            raise ValueError("slot_count must be at least 1")
        lo, hi = self.idle_range
        if lo < 0 or hi < lo:
            raise ValueError("idle_range must satisfy 0 <= min <= max")

    @property
    def n_samples(self) -> int:
        return int(round(self.time_span * self.sample_rate))

    @property
    def amplitude(self) -> float:
        return 10.0 ** (self.tx_power_dbm / 20.0)


_SPEC_DEFAULTS = {
    Technology.BLUETOOTH: dict(symbol_rate=BLUETOOTH_SYMBOL_RATE,
                               burst_duration=BLUETOOTH_SLOT_S,
                               idle_range=(BLUETOOTH_SLOT_S, BLUETOOTH_SLOT_S)),
    Technology.ZIGBEE: dict(symbol_rate=ZIGBEE_CHIP_RATE,
                            burst_duration=ZIGBEE_PACKET_S,
                            idle_range=(0.0, ZIGBEE_GAP_MAX_S)),
    Technology.WLAN: dict(symbol_rate=20e6,
                          burst_duration=WLAN_PACKET_S,
                          idle_range=(WLAN_IDLE_S, WLAN_IDLE_S)),
    Technology.SMARTBAN: dict(symbol_rate=SMARTBAN_SYMBOL_RATE,
                              burst_duration=SMARTBAN_SLOT_S,
                              idle_range=(0.0, 0.0)),
}


def spec_for(technology: Technology, **overrides) -> WaveformSpec:
    """Table-driven WaveformSpec with per-technology defaults."""
    tech = Technology(technology)
    if tech not in _SPEC_DEFAULTS:
        raise ValueError(f"no generator for {tech!r}")
    kw = dict(_SPEC_DEFAULTS[tech])
    kw["tx_power_dbm"] = DEFAULT_TX_POWER_DBM[tech]
    kw.update(overrides)
    return WaveformSpec(technology=tech, **kw)


# ---------------------------------------------------------------------------
# shaping helpers


def _gaussian_taps(bt: float, symbol_rate: float, fs: float, span: int = 3) -> np.ndarray:
    """Unit-sum Gaussian lowpass taps for GFSK shaping (span symbols per side)."""
    sps = int(round(fs / symbol_rate))
    n = np.arange(-span * sps, span * sps + 1)
    b = bt * symbol_rate
    taps = np.exp(-2.0 * np.pi**2 * b**2 * (n / fs) ** 2 / np.log(2.0))
    return taps / taps.sum()


def _cpm_burst(symbols_pm: np.ndarray, mod_index: float, symbol_rate: float,
               fs: float, amplitude: float) -> np.ndarray:
    """Gaussian-filtered continuous-phase FSK burst, one sample stream in/out."""
    sps = int(round(fs / symbol_rate))
    nrz = np.repeat(symbols_pm.astype(np.float64), sps)
    shaped = fftconvolve(nrz, _gaussian_taps(GAUSSIAN_BT, symbol_rate, fs), mode="same")
    freq = 0.5 * mod_index * symbol_rate * shaped
    phase = 2.0 * np.pi * np.cumsum(freq) / fs
    return amplitude * np.exp(1j * phase)


def _oqpsk_burst(chips_pm: np.ndarray, chip_rate: float, fs: float,
                 amplitude: float) -> np.ndarray:
    """Half-sine O-QPSK burst; even chips on I, odd chips on Q delayed Tc."""
    spc = int(round(fs / chip_rate))
    pulse = np.sin(np.pi * np.arange(2 * spc) / (2 * spc))
    i_train = (chips_pm[0::2, None] * pulse).ravel()
    q_train = (chips_pm[1::2, None] * pulse).ravel()
    n = len(chips_pm) * spc
    out = np.zeros(n, dtype=np.complex128)
    out.real = i_train[:n]
    out.imag[spc:] = q_train[: n - spc]
    return amplitude * out


def _ofdm_packet(rng: np.random.Generator, n_symbols: int, amplitude: float) -> np.ndarray:
    """Random-QPSK OFDM packet at the native 80 MHz rate, unit mean power."""
    half = WLAN_OCCUPIED_BINS // 2
    bins = np.concatenate([np.arange(1, half + 1), np.arange(WLAN_FFT - half, WLAN_FFT)])
    points = np.exp(1j * (np.pi / 4 + np.pi / 2 * rng.integers(0, 4, (n_symbols, WLAN_OCCUPIED_BINS))))
    grid = np.zeros((n_symbols, WLAN_FFT), dtype=np.complex128)
    grid[:, bins] = points
    blocks = np.fft.ifft(grid, axis=1) * (WLAN_FFT / np.sqrt(WLAN_OCCUPIED_BINS))
    with_cp = np.concatenate([blocks[:, -WLAN_CP:], blocks], axis=1)
    return amplitude * with_cp.ravel()


def _mix(segment: np.ndarray, offset_hz: float, fs: float, start_index: int) -> np.ndarray:
    """Mix a burst to its channel offset, phase referenced to the span origin."""
    if offset_hz == 0.0:
        return segment
    n = start_index + np.arange(len(segment))
    return segment * np.exp(2j * np.pi * offset_hz * n / fs)


def _check_offset(offset_hz: float, bandwidth_hz: float, fs: float, tech: Technology):
    if abs(offset_hz) + bandwidth_hz / 2.0 > fs / 2.0:
        raise ValueError(
            f"{tech.name}: center offset {offset_hz/1e6:.2f} MHz puts the "
            f"{bandwidth_hz/1e6:.0f} MHz channel outside the +/-{fs/2e6:.0f} MHz band")


def _check_integer_sps(spec: WaveformSpec):
    ratio = spec.sample_rate / spec.symbol_rate
    if abs(ratio - round(ratio)) > 1e-9:
        raise ValueError(
            f"sample_rate/symbol_rate must be an integer, got {ratio:.6f}")


# ---------------------------------------------------------------------------
# generators


def gen_bluetooth(spec: WaveformSpec, seed: int) -> tuple[ComplexSignal, list[BurstEvent]]:
    """Frequency-hopped GFSK slot groups.

    Each group of `slot_count` slots is one transmission on one hop channel;
    625 us of idle follows every group. Per group the RNG draws the hop
    channel first, then the payload bits.
    """
    _check_integer_sps(spec)
    rng = np.random.default_rng(seed)
    fs = spec.sample_rate
    out = np.zeros(spec.n_samples, dtype=np.complex128)
    events = []

    n_sym = int(round(spec.slot_count * spec.burst_duration * spec.symbol_rate))
    group = int(round(spec.slot_count * spec.burst_duration * fs))
    idle = int(round(spec.idle_range[0] * fs))
    bw = NOMINAL_BANDWIDTH_HZ[Technology.BLUETOOTH]

    i0 = 0
    while i0 + group <= len(out):
        offset = 1e6 * rng.integers(BLUETOOTH_HOP_MIN_MHZ, BLUETOOTH_HOP_MAX_MHZ + 1)
        bits = rng.integers(0, 2, n_sym) * 2 - 1
        burst = _cpm_burst(bits, BLUETOOTH_MOD_INDEX, spec.symbol_rate, fs,
                           spec.amplitude)
        out[i0:i0 + group] = _mix(burst, offset, fs, i0)
        events.append(BurstEvent(Technology.BLUETOOTH, i0 / fs, (i0 + group) / fs,
                                 offset - bw / 2, offset + bw / 2))
        i0 += group + idle
    return ComplexSignal(fs, out), events


def gen_zigbee(spec: WaveformSpec, seed: int) -> tuple[ComplexSignal, list[BurstEvent]]:
    """Half-sine O-QPSK packets with uniform idle gaps; full packets only."""
    _check_integer_sps(spec)
    bw = NOMINAL_BANDWIDTH_HZ[Technology.ZIGBEE]
    _check_offset(spec.center_offset_hz, bw, spec.sample_rate, Technology.ZIGBEE)
    rng = np.random.default_rng(seed)
    fs = spec.sample_rate
    out = np.zeros(spec.n_samples, dtype=np.complex128)
    events = []

    n_chips = int(round(spec.burst_duration * spec.symbol_rate))
    pkt = int(round(spec.burst_duration * fs))
    off = spec.center_offset_hz

    i0 = 0
    while i0 + pkt <= len(out):
        chips = rng.integers(0, 2, n_chips) * 2 - 1
        burst = _oqpsk_burst(chips, spec.symbol_rate, fs, spec.amplitude)
        out[i0:i0 + pkt] = _mix(burst, off, fs, i0)
        events.append(BurstEvent(Technology.ZIGBEE, i0 / fs, (i0 + pkt) / fs,
                                 off - bw / 2, off + bw / 2))
        gap = rng.uniform(spec.idle_range[0], spec.idle_range[1])
        i0 += pkt + int(round(gap * fs))
    return ComplexSignal(fs, out), events


def gen_wifi(spec: WaveformSpec, seed: int) -> tuple[ComplexSignal, list[BurstEvent]]:
    """OFDM packet train: 45 symbols of 4 us per packet, fixed 20 us idle."""
    bw = NOMINAL_BANDWIDTH_HZ[Technology.WLAN]
    _check_offset(spec.center_offset_hz, bw, spec.sample_rate, Technology.WLAN)
    rng = np.random.default_rng(seed)
    fs = spec.sample_rate
    out = np.zeros(spec.n_samples, dtype=np.complex128)
    events = []

    sym_len = WLAN_FFT + WLAN_CP
    n_symbols = int(round(spec.burst_duration * fs)) // sym_len
    pkt = n_symbols * sym_len
    idle = int(round(spec.idle_range[0] * fs))
    off = spec.center_offset_hz

    i0 = 0
    while i0 + pkt <= len(out):
        burst = _ofdm_packet(rng, n_symbols, spec.amplitude)
        out[i0:i0 + pkt] = _mix(burst, off, fs, i0)
        events.append(BurstEvent(Technology.WLAN, i0 / fs, (i0 + pkt) / fs,
                                 off - bw / 2, off + bw / 2))
        i0 += pkt + idle
    return ComplexSignal(fs, out), events


def gen_smartban(spec: WaveformSpec, seed: int) -> tuple[ComplexSignal, list[BurstEvent]]:
    """One window of back-to-back slots per span, start uniform on the grid."""
    _check_integer_sps(spec)
    bw = NOMINAL_BANDWIDTH_HZ[Technology.SMARTBAN]
    _check_offset(spec.center_offset_hz, bw, spec.sample_rate, Technology.SMARTBAN)
    rng = np.random.default_rng(seed)
    fs = spec.sample_rate
    out = np.zeros(spec.n_samples, dtype=np.complex128)

    window = int(round(spec.slot_count * spec.burst_duration * fs))
    if window > len(out):
        raise ValueError("slot window longer than the time span")
    n_sym = int(round(spec.slot_count * spec.burst_duration * spec.symbol_rate))
    off = spec.center_offset_hz

    i0 = int(rng.integers(0, len(out) - window + 1))
    bits = rng.integers(0, 2, n_sym) * 2 - 1
    burst = _cpm_burst(bits, SMARTBAN_MOD_INDEX, spec.symbol_rate, fs, spec.amplitude)
    out[i0:i0 + window] = _mix(burst, off, fs, i0)
    events = [BurstEvent(Technology.SMARTBAN, i0 / fs, (i0 + window) / fs,
                         off - bw / 2, off + bw / 2)]
    return ComplexSignal(fs, out), events


_GENERATORS: dict[Technology, Callable] = {
    Technology.BLUETOOTH: gen_bluetooth,
    Technology.ZIGBEE: gen_zigbee,
    Technology.WLAN: gen_wifi,
    Technology.SMARTBAN: gen_smartban,
}


def generate(spec: WaveformSpec, seed: int) -> tuple[ComplexSignal, list[BurstEvent]]:
    """Dispatch to the right generator for spec.technology."""
    try:
        fn = _GENERATORS[spec.technology]
    except KeyError:
        raise ValueError(f"no generator for {spec.technology!r}") from None
    return fn(spec, seed)


def shift_to_offset(sig: ComplexSignal, offset_hz: float,
                    bandwidth_hz: float = 0.0) -> ComplexSignal:
    """Mix a whole signal to a new center offset.

    `bandwidth_hz` is the signal's nominal occupancy; the shift is refused if
    any of it would leave the observable band (aliasing guard).
    """
    if abs(offset_hz) + bandwidth_hz / 2.0 > sig.sample_rate / 2.0:
        raise ValueError("offset would alias the signal outside the band")
    n = np.arange(len(sig.samples))
    return ComplexSignal(sig.sample_rate,
                         sig.samples * np.exp(2j * np.pi * offset_hz * n / sig.sample_rate))
