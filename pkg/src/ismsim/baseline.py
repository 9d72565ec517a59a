"""Classical spectrogram segmentation: threshold, group, classify by shape.

The detector runs an Otsu threshold over the normalized image, groups
foreground pixels into 8-connected components, and assigns each component a
technology from two shape cues:

* occupied bandwidth, measured as the number of rows whose peak value sits
  within 15 dB of the component peak (15/80 in normalized units, since the
  image spans an 80 dB clip range). Bounding-box height is useless here:
  modulation skirts put faint rows well outside the true occupancy.
* duration, taken from the bounding box, matched against the burst lengths
  each technology can produce (slot multiples of 625 us for Bluetooth and
  1.25 ms for SmartBAN, single or merged packet trains for ZigBee, anything
  up to the full frame for WLAN).

Components matching several signatures take the higher-priority technology;
components matching none fall back to WLAN when wider than 10 MHz and to
Unknown otherwise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ismsim.waveforms import DEFAULT_SAMPLE_RATE, DEFAULT_TIME_SPAN, Technology

# occupied rows are those within this many dB of the component peak,
# expressed as a fraction of the image's 80 dB display range
_PROFILE_CUT = 15.0 / 80.0

_SLOT_MULTIPLES = (1, 3, 5)


def _slot_windows(base_s: float, tol: float = 0.25):
    return tuple((k * base_s * (1 - tol), k * base_s * (1 + tol))
                 for k in _SLOT_MULTIPLES)


# (technology, bandwidth range in Hz, acceptable duration windows in s),
# scanned in priority order
SIGNATURES = (
    (Technology.BLUETOOTH, (0.65e6, 1.35e6), _slot_windows(625e-6)),
    (Technology.SMARTBAN, (1.2e6, 2.8e6), _slot_windows(1.25e-3)),
    (Technology.ZIGBEE, (2.0e6, 6.0e6), ((3.19e-3, 5.33e-3), (14e-3, 19.2e-3))),
    (Technology.WLAN, (10e6, 30e6), ((100e-6, 20.5e-3),)),
)


@dataclass(frozen=True)
class DetectedRegion:
    technology: Technology
    row_start: int
    row_stop: int
    col_start: int
    col_stop: int
    area: int
    bandwidth_hz: float
    duration_s: float


def otsu_threshold(image: np.ndarray, nbins: int = 256) -> float:
    """Threshold maximizing between-class variance of the value histogram."""
    x = np.asarray(image, dtype=np.float64).ravel()
    lo = float(x.min())
    hi = float(x.max())
    if hi <= lo:
        return lo
    hist, edges = np.histogram(x, bins=nbins, range=(lo, hi))
    centers = (edges[:-1] + edges[1:]) / 2.0
    p = hist / hist.sum()
    omega = np.cumsum(p)
    mu = np.cumsum(p * centers)
    mu_t = mu[-1]
    with np.errstate(divide="ignore", invalid="ignore"):
        sigma_b = (mu_t * omega - mu) ** 2 / (omega * (1.0 - omega))
    sigma_b[~np.isfinite(sigma_b)] = -1.0
    return float(centers[np.argmax(sigma_b)])


def classify_region(bandwidth_hz: float, duration_s: float) -> Technology:
    for tech, (b_lo, b_hi), windows in SIGNATURES:
        if b_lo <= bandwidth_hz <= b_hi and any(
                lo <= duration_s <= hi for lo, hi in windows):
            return tech
    if bandwidth_hz > 10e6:
        return Technology.WLAN
    return Technology.UNKNOWN


def segment_image(image: np.ndarray, *, threshold: float | None = None,
                  min_area: int = 4,
                  time_span_s: float = DEFAULT_TIME_SPAN,
                  bandwidth_hz: float = DEFAULT_SAMPLE_RATE):
    """Segment a normalized spectrogram image.

    Returns (mask, regions): a uint8 technology-code mask the same shape as
    the image, and the list of detected regions. Components classified as
    Unknown stay at code 0 in the mask.
    """
    img = np.asarray(image)
    if img.ndim != 2:
        raise ValueError("image must be 2-d")
    df = bandwidth_hz / img.shape[0]
    dt = time_span_s / img.shape[1]
    thr = otsu_threshold(img) if threshold is None else float(threshold)
    labels, count = ndimage.label(img > thr, structure=np.ones((3, 3), bool))
    mask = np.zeros(img.shape, dtype=np.uint8)
    regions = []
    for i, sl in enumerate(ndimage.find_objects(labels), start=1):
        comp = labels[sl] == i
        area = int(comp.sum())
        if area < min_area:
            continue
        profile = np.where(comp, img[sl], 0.0).max(axis=1)
        occupied_rows = int((profile >= profile.max() - _PROFILE_CUT).sum())
        bw = occupied_rows * df
        dur = (sl[1].stop - sl[1].start) * dt
        tech = classify_region(bw, dur)
        mask[sl][comp] = np.uint8(tech)
        regions.append(DetectedRegion(
            technology=tech, row_start=sl[0].start, row_stop=sl[0].stop,
            col_start=sl[1].start, col_stop=sl[1].stop, area=area,
            bandwidth_hz=bw, duration_s=dur))
    return mask, regions
