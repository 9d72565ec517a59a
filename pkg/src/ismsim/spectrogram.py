"""Short-time Fourier analysis and the fixed-size spectrogram image.

The analysis grid is pinned: 256-sample Hann window, 156-sample hop (100
overlap), zero-padded 4096-point FFT, two-sided and centered so frequency
runs from -fs/2 to +fs/2. A signal of N samples yields
floor((N - 256)/156) + 1 frames; the 20 ms frame at 80 MHz gives 10,255.

The STFT is scaled by 1/sqrt(fft_length * sum(w^2)) so squared magnitudes
read as power per bin (with sqrt-milliwatt signals the thermal floor lands
near -124 dB, strong nearby bursts near -50 dB). Images are built by
converting power to dB, clipping to [-130, -50], mean-pooling in the dB
domain onto a 256 x 256 grid (16 frequency bins per row, frames//256 per
column, remainder frames dropped), then min/max normalizing to [0, 1].

`scene_image` fuses the whole chain in single precision, block by block,
skipping all-zero stretches; it exists because full scenes are rendered in
bulk and the double-precision path costs about three times as much.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.fft

from ismsim.channel import ChannelRealization
from ismsim.waveforms import ComplexSignal


@dataclass(frozen=True)
class StftConfig:
    fft_length: int = 4096
    window_length: int = 256
    overlap: int = 100
    window: str = "hann"
    db_floor: float = -200.0  # dB assigned to zero-power cells
    db_range: tuple[float, float] = (-130.0, -50.0)
    image_size: int = 256

    def __post_init__(self):
        if not 0 <= self.overlap < self.window_length:
            raise ValueError("overlap must be in [0, window_length)")
        if self.fft_length < self.window_length:
            raise ValueError("fft_length must cover the window")
        if self.fft_length % self.image_size != 0:
            raise ValueError("fft_length must be a multiple of image_size")

    @property
    def hop(self) -> int:
        return self.window_length - self.overlap


@dataclass
class TfGrid:
    """Time/frequency grid: values indexed [frequency, frame]."""

    values: np.ndarray
    freq_hz: np.ndarray
    time_s: np.ndarray


def frame_count(n_samples: int, cfg: StftConfig) -> int:
    if n_samples < cfg.window_length:
        raise ValueError("signal shorter than one analysis window")
    return (n_samples - cfg.window_length) // cfg.hop + 1


def _window(cfg: StftConfig, dtype) -> np.ndarray:
    if cfg.window != "hann":
        raise ValueError(f"unsupported window {cfg.window!r}")
    w = 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(cfg.window_length) / cfg.window_length)
    scale = 1.0 / np.sqrt(cfg.fft_length * np.sum(w * w))
    return (w * scale).astype(dtype)


def _frames(samples: np.ndarray, cfg: StftConfig) -> np.ndarray:
    n = frame_count(len(samples), cfg)
    view = np.lib.stride_tricks.sliding_window_view(samples, cfg.window_length)
    return view[:: cfg.hop][:n]


def stft(sig: ComplexSignal, cfg: StftConfig) -> TfGrid:
    """Windowed, zero-padded, centered STFT.

    Complex64 input stays single precision; anything else is computed in
    complex128.
    """
    dt = np.complex64 if sig.samples.dtype == np.complex64 else np.complex128
    x = np.asarray(sig.samples, dtype=dt)
    w = _window(cfg, np.float32 if dt == np.complex64 else np.float64)
    spec = scipy.fft.fft(_frames(x, cfg) * w, n=cfg.fft_length, axis=1,
                         overwrite_x=True)
    spec = np.fft.fftshift(spec, axes=1).T
    nfft = cfg.fft_length
    freq = (np.arange(nfft) - nfft // 2) * (sig.sample_rate / nfft)
    starts = np.arange(spec.shape[1]) * cfg.hop
    time = (starts + cfg.window_length / 2) / sig.sample_rate
    return TfGrid(values=spec, freq_hz=freq, time_s=time)


def power(grid: TfGrid) -> TfGrid:
    """Squared magnitude of an STFT grid."""
    v = grid.values
    return TfGrid(values=v.real**2 + v.imag**2, freq_hz=grid.freq_hz,
                  time_s=grid.time_s)


# ---------------------------------------------------------------------------
# image pipeline


def _pool_db(db: np.ndarray, cfg: StftConfig) -> np.ndarray:
    """Mean-pool a [freq, frame] dB array onto the square image grid."""
    size = cfg.image_size
    nf, nt = db.shape
    rf = nf // size
    ct = nt // size
    if nf % size or ct < 1:
        raise ValueError(
            f"grid {db.shape} cannot pool onto {size} x {size}")
    used = db[:, : size * ct]
    return used.reshape(size, rf, size, ct).mean(axis=(1, 3))


def to_image(psd, cfg: StftConfig) -> np.ndarray:
    """PSD grid to the normalized square image.

    dB conversion (zero cells floored), clip to cfg.db_range, dB-domain mean
    pooling, then min/max normalization. A constant clipped grid maps to an
    all-zero image.
    """
    values = psd.values if isinstance(psd, TfGrid) else np.asarray(psd)
    lo, hi = cfg.db_range
    db = 10.0 * np.log10(np.maximum(values, 10.0 ** (cfg.db_floor / 10.0)))
    np.clip(db, lo, hi, out=db)
    pooled = _pool_db(db, cfg)
    mn = pooled.min()
    mx = pooled.max()
    if mx > mn:
        pooled = (pooled - mn) / (mx - mn)
    else:
        pooled = np.zeros_like(pooled)
    return pooled.astype(np.float32)


def scene_image(sig: ComplexSignal, cfg: StftConfig) -> np.ndarray:
    """Fused single-precision render of the spectrogram image.

    Processes the STFT in 16-column blocks, converting to pooled dB on the
    fly, and skips blocks whose samples are all zero (their pooled value is
    exactly the clip floor). Matches to_image(power(stft(...))) to within
    single-precision rounding and is deterministic run to run.
    """
    size = cfg.image_size
    x = np.ascontiguousarray(sig.samples, dtype=np.complex64)
    n_frames = frame_count(len(x), cfg)
    ct = n_frames // size
    if ct < 1:
        raise ValueError("signal too short for the image grid")
    w = _window(cfg, np.float32)
    view = np.lib.stride_tricks.sliding_window_view(x, cfg.window_length)[:: cfg.hop]
    lo, hi = cfg.db_range
    floor = np.float32(10.0 ** (cfg.db_floor / 10.0))
    rf = cfg.fft_length // size

    # prefix count of nonzero samples, for block skipping
    nonzero = np.zeros(len(x) + 1, dtype=np.int64)
    np.cumsum(x != 0, out=nonzero[1:])

    cols_per_block = 16
    img = np.empty((size, size), dtype=np.float32)  # [unshifted freq group, col]
    for c0 in range(0, size, cols_per_block):
        f0 = c0 * ct
        f1 = (c0 + cols_per_block) * ct
        s0 = f0 * cfg.hop
        s1 = min((f1 - 1) * cfg.hop + cfg.window_length, len(x))
        if nonzero[s1] == nonzero[s0]:
            img[:, c0:c0 + cols_per_block] = np.float32(lo)
            continue
        spec = scipy.fft.fft(view[f0:f1] * w, n=cfg.fft_length, axis=1,
                             overwrite_x=True)
        p = spec.real**2
        p += spec.imag**2
        np.maximum(p, floor, out=p)
        db = np.log10(p, out=p)
        db *= 10.0
        np.clip(db, lo, hi, out=db)
        pooled = db.reshape(cols_per_block, ct, size, rf).mean(axis=(1, 3))
        img[:, c0:c0 + cols_per_block] = pooled.T
    img = np.roll(img, -size // 2, axis=0)  # center the frequency axis

    mn = img.min()
    mx = img.max()
    if mx > mn:
        img -= mn
        img /= mx - mn
    else:
        img.fill(0.0)
    return img


def verify_tf_approximation(sig: ComplexSignal, real: ChannelRealization,
                            cfg: StftConfig) -> float:
    """Worst-case relative error of the flat multiplicative channel picture.

    Compares |STFT(channel(x))|^2 against |STFT(x) * g|^2 where g is the
    channel's net complex gain at f = 0 (path-loss amplitude times the tap
    sum). Exact (error 0) for a single zero-delay tap; genuinely frequency-
    selective channels return the honest nonzero deviation, normalized by
    the peak reference cell.
    """
    from ismsim.channel import apply_channel

    net = 10.0 ** (-real.path_loss_db / 20.0) * complex(np.sum(real.gains))
    ref = stft(sig, cfg).values * net
    out = stft(apply_channel(sig, real), cfg).values
    s_ref = ref.real**2 + ref.imag**2
    s_out = out.real**2 + out.imag**2
    denom = s_ref.max()
    if denom == 0.0:
        return 0.0
    return float(np.max(np.abs(s_out - s_ref)) / denom)
