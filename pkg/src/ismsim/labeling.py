"""Ground-truth label masks from burst event lists.

Events are axis-aligned rectangles in time/frequency. The mask is a fixed
256 x 256 uint8 grid covering the nominal 20 ms x 80 MHz frame (row 0 is
the lowest frequency, columns advance in time); a cell takes an event's
code when the event covers at least half the cell's area. Overlaps resolve
by technology priority: Bluetooth over SmartBAN over ZigBee over WLAN.
"""
from __future__ import annotations

import numpy as np

from ismsim.waveforms import (
    DEFAULT_SAMPLE_RATE,
    DEFAULT_TIME_SPAN,
    PRIORITY_ORDER,
    BurstEvent,
    Technology,
)

GRID_SIZE = 256
# tolerance on the half-coverage test, to keep exactly-half cells stable
_COVERAGE_SLACK = 1e-9


def _axis_coverage(lo: float, hi: float, start: float, step: float,
                   n: int) -> np.ndarray:
    """Covered fraction of each of n cells [start + k*step, start + (k+1)*step)."""
    edges = start + step * np.arange(n + 1)
    left = np.maximum(edges[:-1], lo)
    right = np.minimum(edges[1:], hi)
    return np.clip(right - left, 0.0, None) / step


def event_cells(event: BurstEvent, *, time_span_s: float = DEFAULT_TIME_SPAN,
                bandwidth_hz: float = DEFAULT_SAMPLE_RATE,
                size: int = GRID_SIZE, min_coverage: float = 0.5) -> np.ndarray:
    """Boolean mask of grid cells at least min_coverage covered by the event."""
    dt = time_span_s / size
    df = bandwidth_hz / size
    cov_f = _axis_coverage(event.f_low, event.f_high, -bandwidth_hz / 2.0, df, size)
    cov_t = _axis_coverage(event.t_start, event.t_end, 0.0, dt, size)
    area = cov_f[:, None] * cov_t[None, :]
    return area >= min_coverage - _COVERAGE_SLACK


def label_mask(events: list[BurstEvent], *,
               time_span_s: float = DEFAULT_TIME_SPAN,
               bandwidth_hz: float = DEFAULT_SAMPLE_RATE,
               size: int = GRID_SIZE) -> np.ndarray:
    """Rasterize events onto a uint8 code mask, higher priority on top."""
    mask = np.zeros((size, size), dtype=np.uint8)
    for tech in reversed(PRIORITY_ORDER):
        if tech == Technology.UNKNOWN:
            continue
        for ev in events:
            if ev.technology != tech:
                continue
            cells = event_cells(ev, time_span_s=time_span_s,
                                bandwidth_hz=bandwidth_hz, size=size)
            mask[cells] = np.uint8(tech)
    return mask
