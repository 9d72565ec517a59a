"""Indoor propagation: tapped-delay fading, path loss, and receiver noise.

Small-scale fading is a short tapped delay line. The first tap carries the
Rician line-of-sight component,

    g0 = sqrt(p0) * (sqrt(K/(K+1)) * exp(j*theta) + sqrt(1/(K+1)) * z),

with theta drawn uniformly per realization and z circular complex normal;
the remaining taps are pure scatter with powers from an exponential decay
profile normalized to unit total. K = 0 reduces to Rayleigh on every tap,
and the Rayleigh model shares the draw path so the two are sample-identical
at K = 0.

Large-scale loss uses one of two models. Wi-Fi devices get the indoor
office fit

    PL(d) = 32.4 + 17.3*log10(d) + 20*log10(fc_GHz),

everything else the log-distance model referenced to 1 m free space,

    PL(d) = 32.45 + 20*log10(fc_GHz) + 10*n*log10(d) + X,  X ~ N(0, sigma^2).

Thermal noise is -174 dBm/Hz plus a 7 dB receiver noise figure.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ismsim.waveforms import BAND_CENTER_HZ, ComplexSignal

NOISE_FLOOR_DBM_HZ = -167.0  # -174 dBm/Hz thermal + 7 dB noise figure


@dataclass(frozen=True)
class ChannelConfig:
    model: str = "rician"  # "rician" or "rayleigh"
    k_factor: float = 5.0  # linear Rician K, ignored for rayleigh
    tap_delays_s: tuple = (0.0, 50e-9, 120e-9)
    tap_decay_s: float = 50e-9  # exponential power profile constant
    path_loss: str = "lognormal"  # "lognormal" or "wlan_indoor"
    path_loss_exponent: float = 2.5
    shadowing_sigma_db: float = 4.0
    carrier_hz: float = BAND_CENTER_HZ

    def __post_init__(self):
        if self.model not in ("rician", "rayleigh"):
            raise ValueError(f"unknown fading model {self.model!r}")
        if self.path_loss not in ("lognormal", "wlan_indoor"):
            raise ValueError(f"unknown path loss model {self.path_loss!r}")
        if self.k_factor < 0:
            raise ValueError("k_factor must be non-negative")
        if len(self.tap_delays_s) < 1 or self.tap_delays_s[0] != 0.0:
            raise ValueError("tap_delays_s must start at 0")


@dataclass
class ChannelRealization:
    """One drawn channel: complex tap gains plus the large-scale loss."""

    gains: np.ndarray
    delays_s: tuple
    path_loss_db: float
    seed: int


def tap_powers(cfg: ChannelConfig) -> np.ndarray:
    """Normalized exponential power profile over the configured tap delays."""
    d = np.asarray(cfg.tap_delays_s, dtype=np.float64)
    p = np.exp(-d / cfg.tap_decay_s)
    return p / p.sum()


def path_loss_wlan(distance_m: float, carrier_hz: float = BAND_CENTER_HZ) -> float:
    """Indoor office path loss used for Wi-Fi links, in dB."""
    if distance_m < 1.0:
        raise ValueError("distance must be at least 1 m")
    return 32.4 + 17.3 * np.log10(distance_m) + 20.0 * np.log10(carrier_hz / 1e9)


def _lognormal_db(distance_m: float, exponent: float, carrier_hz: float,
                  shadow_db: float) -> float:
    fspl_1m = 32.45 + 20.0 * np.log10(carrier_hz / 1e9)
    return fspl_1m + 10.0 * exponent * np.log10(distance_m) + shadow_db


def path_loss_lognormal(distance_m: float, exponent: float, sigma_db: float,
                        seed: int, carrier_hz: float = BAND_CENTER_HZ) -> float:
    """Log-distance path loss with log-normal shadowing, in dB."""
    if distance_m < 1.0:
        raise ValueError("distance must be at least 1 m")
    shadow = 0.0
    if sigma_db > 0.0:
        shadow = float(np.random.default_rng(seed).normal(0.0, sigma_db))
    return _lognormal_db(distance_m, exponent, carrier_hz, shadow)


def draw_channel(cfg: ChannelConfig, distance_m: float, seed: int) -> ChannelRealization:
    """Draw one channel realization.

    Draw order is fixed (LOS phase, then all tap scatter, then shadowing) so
    that rician with K = 0 and rayleigh consume the stream identically.
    """
    if distance_m < 1.0:
        raise ValueError("distance must be at least 1 m")
    rng = np.random.default_rng(seed)
    p = tap_powers(cfg)
    n_taps = len(p)

    theta = rng.uniform(0.0, 2.0 * np.pi)
    z = rng.standard_normal((n_taps, 2)) @ np.array([1.0, 1.0j]) / np.sqrt(2.0)

    k = cfg.k_factor if cfg.model == "rician" else 0.0
    gains = np.sqrt(p / (k + 1.0)) * z
    gains[0] += np.sqrt(p[0] * k / (k + 1.0)) * np.exp(1j * theta)

    if cfg.path_loss == "wlan_indoor":
        pl = path_loss_wlan(distance_m, cfg.carrier_hz)
    else:
        shadow = 0.0
        if cfg.shadowing_sigma_db > 0.0:
            shadow = float(rng.normal(0.0, cfg.shadowing_sigma_db))
        pl = _lognormal_db(distance_m, cfg.path_loss_exponent, cfg.carrier_hz, shadow)
    return ChannelRealization(gains=gains, delays_s=tuple(cfg.tap_delays_s),
                              path_loss_db=float(pl), seed=seed)


def apply_channel(sig: ComplexSignal, real: ChannelRealization) -> ComplexSignal:
    """Convolve with the tap line and apply the path-loss amplitude.

    Tap delays are rounded to the nearest sample; the output keeps the input
    length (delayed energy past the end is dropped, the head is zero-filled).
    """
    x = sig.samples
    amp = 10.0 ** (-real.path_loss_db / 20.0)
    out = np.zeros_like(x)
    for g, tau in zip(real.gains, real.delays_s):
        n = int(round(tau * sig.sample_rate))
        if n >= len(x):
            continue
        if n == 0:
            out += g * x
        else:
            out[n:] += g * x[:len(x) - n]
    out *= amp
    return ComplexSignal(sig.sample_rate, out)


def add_awgn(sig: ComplexSignal, noise_floor_dbm_per_hz: float | None = NOISE_FLOOR_DBM_HZ,
             seed: int = 0) -> ComplexSignal:
    """Add white receiver noise for the full sample rate bandwidth.

    Total noise power is 10^(floor/10) * fs in mW, split evenly over the two
    quadrature components. A floor of None disables noise and returns the
    input unchanged.
    """
    if noise_floor_dbm_per_hz is None:
        return sig
    var = 10.0 ** (noise_floor_dbm_per_hz / 10.0) * sig.sample_rate
    rng = np.random.default_rng(seed)
    n = len(sig.samples)
    noise = rng.standard_normal((2, n)) * np.sqrt(var / 2.0)
    return ComplexSignal(sig.sample_rate, sig.samples + noise[0] + 1j * noise[1])
