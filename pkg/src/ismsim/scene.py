"""Scenario sampling and full-scene rendering.

A scenario is a SmartBAN device plus zero or more interferers dropped in a
disc-shaped cell. Every random draw is tied to a 64-bit record seed hashed
from (master seed, record index), and each device hashes further sub-seeds
for its waveform and channel, so any record can be regenerated alone,
records are independent of batch order, and parallel generation is
byte-identical to sequential.

Placement model per device: position uniform over a disc of radius
cell_radius_m (distance clamped to 1 m for the path-loss law), an even coin
for line of sight, Rician K uniform on [3, 10] with path-loss exponent 2.5
when in sight, Rayleigh fading with exponent 3.5 otherwise. Technologies
pick their carrier from the usual channel plans: WLAN 2412-2467 MHz in
5 MHz steps, ZigBee 2405-2475 in 5 MHz steps, SmartBAN 2402-2478 in 2 MHz
steps, all expressed as offsets from the 2.44 GHz analysis center.
Bluetooth hops internally and needs no fixed carrier.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass

import numpy as np

from ismsim.channel import (
    NOISE_FLOOR_DBM_HZ,
    ChannelConfig,
    add_awgn,
    apply_channel,
    draw_channel,
)
from ismsim.labeling import label_mask
from ismsim.spectrogram import StftConfig, scene_image
from ismsim.waveforms import (
    BAND_CENTER_HZ,
    DEFAULT_SAMPLE_RATE,
    DEFAULT_TIME_SPAN,
    ComplexSignal,
    Technology,
    generate,
    spec_for,
)

_INTERFERER_CHOICES = (Technology.WLAN, Technology.BLUETOOTH,
                       Technology.ZIGBEE, Technology.SMARTBAN)

# seed roles for the per-device hash
_ROLE_WAVEFORM = 0
_ROLE_CHANNEL = 1
_ROLE_NOISE = 2

SWEEP_DISTANCES_M = (1.0, 2.5, 5.0, 8.0, 10.0, 12.0, 15.0, 20.0)


@dataclass(frozen=True)
class SimConfig:
    master_seed: int = 0
    num_records: int = 100
    min_devices: int = 1
    max_devices: int = 4
    cell_radius_m: float = 20.0
    sample_rate: float = DEFAULT_SAMPLE_RATE
    time_span_s: float = DEFAULT_TIME_SPAN
    noise: bool = True
    noise_floor_dbm_per_hz: float = NOISE_FLOOR_DBM_HZ
    shadowing_sigma_db: float = 4.0
    splits: tuple = (("train", 0.7), ("val", 0.2), ("test", 0.1))

    def __post_init__(self):
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if not 1 <= self.min_devices <= self.max_devices:
            raise ValueError("device count range is invalid")
        if self.cell_radius_m < 1.0:
            raise ValueError("cell_radius_m must be at least 1 m")
        total = sum(frac for _, frac in self.splits)
        if abs(total - 1.0) > 1e-9:
            raise ValueError("split fractions must sum to 1")


@dataclass(frozen=True)
class DevicePlacement:
    technology: Technology
    distance_m: float
    x_m: float
    y_m: float
    los: bool
    k_factor: float
    path_loss_exponent: float
    slot_count: int
    center_offset_hz: float


@dataclass(frozen=True)
class Scenario:
    index: int
    seed: int
    devices: tuple


@dataclass
class RenderedScene:
    image: np.ndarray
    mask: np.ndarray
    events: tuple


def _hash_u64(*values: int) -> int:
    packed = b"".join(struct.pack("<Q", v & 0xFFFFFFFFFFFFFFFF) for v in values)
    return int.from_bytes(hashlib.blake2b(packed, digest_size=8).digest(), "little")


def record_seed(master_seed: int, index: int, stream: int = 0) -> int:
    """Per-record seed: a 64-bit hash of (master seed, index, stream)."""
    return _hash_u64(master_seed, index, stream)


def _device_seed(rec_seed: int, device_index: int, role: int) -> int:
    return _hash_u64(rec_seed, device_index, role)


def _carrier_offset_hz(tech: Technology, rng) -> float:
    if tech == Technology.WLAN:
        fc = 2412e6 + 5e6 * rng.integers(12)
    elif tech == Technology.ZIGBEE:
        fc = 2405e6 + 5e6 * rng.integers(15)
    elif tech == Technology.SMARTBAN:
        fc = 2402e6 + 2e6 * rng.integers(39)
    else:
        return 0.0
    return float(fc - BAND_CENTER_HZ)


def sample_scenario(cfg: SimConfig, index: int, *, stream: int = 0,
                    pin_first_distance: float | None = None) -> Scenario:
    """Draw one scenario. Device 0 is always SmartBAN."""
    seed = record_seed(cfg.master_seed, index, stream)
    rng = np.random.default_rng(seed)
    count = int(rng.integers(cfg.min_devices, cfg.max_devices + 1))
    techs = [Technology.SMARTBAN]
    for _ in range(count - 1):
        techs.append(_INTERFERER_CHOICES[rng.integers(len(_INTERFERER_CHOICES))])

    devices = []
    for i, tech in enumerate(techs):
        r = cfg.cell_radius_m * math.sqrt(rng.random())
        theta = 2.0 * math.pi * rng.random()
        x, y = r * math.cos(theta), r * math.sin(theta)
        if i == 0 and pin_first_distance is not None:
            r, x, y = pin_first_distance, pin_first_distance, 0.0
        los = rng.random() < 0.5
        k = float(rng.uniform(3.0, 10.0)) if los else 0.0
        if tech in (Technology.BLUETOOTH, Technology.SMARTBAN):
            slot = int((1, 3, 5)[rng.integers(3)])
        else:
            slot = 1
        offset = _carrier_offset_hz(tech, rng)
        devices.append(DevicePlacement(
            technology=tech, distance_m=max(r, 1.0), x_m=x, y_m=y, los=los,
            k_factor=k, path_loss_exponent=2.5 if los else 3.5,
            slot_count=slot, center_offset_hz=offset))
    return Scenario(index=index, seed=seed, devices=tuple(devices))


def channel_for(dev: DevicePlacement, cfg: SimConfig) -> ChannelConfig:
    return ChannelConfig(
        model="rician" if dev.los else "rayleigh",
        k_factor=dev.k_factor,
        path_loss="lognormal",
        path_loss_exponent=dev.path_loss_exponent,
        shadowing_sigma_db=cfg.shadowing_sigma_db,
    )


def render_scene(scn: Scenario, cfg: SimConfig,
                 stft_cfg: StftConfig | None = None) -> RenderedScene:
    """Generate, fade, sum and image a scenario; also build its label mask."""
    stft_cfg = stft_cfg or StftConfig()
    n = int(round(cfg.time_span_s * cfg.sample_rate))
    total = np.zeros(n, dtype=np.complex128)
    events = []
    for i, dev in enumerate(scn.devices):
        spec = spec_for(dev.technology, sample_rate=cfg.sample_rate,
                        time_span=cfg.time_span_s, slot_count=dev.slot_count,
                        center_offset_hz=dev.center_offset_hz)
        sig, ev = generate(spec, seed=_device_seed(scn.seed, i, _ROLE_WAVEFORM))
        real = draw_channel(channel_for(dev, cfg), dev.distance_m,
                            seed=_device_seed(scn.seed, i, _ROLE_CHANNEL))
        total += apply_channel(sig, real).samples
        events.extend(ev)
    mixed = ComplexSignal(sample_rate=cfg.sample_rate, samples=total)
    if cfg.noise:
        mixed = add_awgn(mixed, cfg.noise_floor_dbm_per_hz,
                         seed=_device_seed(scn.seed, 0, _ROLE_NOISE))
    image = scene_image(mixed, stft_cfg)
    mask = label_mask(events, time_span_s=cfg.time_span_s,
                      bandwidth_hz=cfg.sample_rate)
    return RenderedScene(image=image, mask=mask, events=tuple(events))


# ---------------------------------------------------------------------------
# split assignment


def _largest_remainder(total: int, fractions) -> list:
    raw = [total * f for f in fractions]
    base = [int(math.floor(v)) for v in raw]
    order = sorted(range(len(raw)), key=lambda i: (base[i] - raw[i], i))
    for i in order[: total - sum(base)]:
        base[i] += 1
    return base


def stratum_key(scn: Scenario) -> tuple:
    """Strata group scenarios by the set of technologies present."""
    return tuple(sorted({int(d.technology) for d in scn.devices}))


def assign_splits(scenarios, splits) -> list:
    """Stratified split assignment.

    Split sizes follow the fractions by largest remainder globally; each
    stratum is cut by the same rule, and any per-stratum rounding drift is
    reconciled by reassigning records, scanned from the highest index down,
    so the global counts land exactly on target. Fully deterministic.
    """
    names = [name for name, _ in splits]
    fracs = [frac for _, frac in splits]
    n = len(scenarios)
    targets = dict(zip(names, _largest_remainder(n, fracs)))

    strata: dict = {}
    for pos, scn in enumerate(scenarios):
        strata.setdefault(stratum_key(scn), []).append(pos)

    assignment = [None] * n
    for key in sorted(strata):
        members = strata[key]
        quotas = _largest_remainder(len(members), fracs)
        cursor = 0
        for name, q in zip(names, quotas):
            for pos in members[cursor:cursor + q]:
                assignment[pos] = name
            cursor += q

    counts = {name: assignment.count(name) for name in names}
    for name in names:
        while counts[name] > targets[name]:
            short = next(m for m in names if counts[m] < targets[m])
            for pos in range(n - 1, -1, -1):
                if assignment[pos] == name:
                    assignment[pos] = short
                    break
            counts[name] -= 1
            counts[short] += 1
    return assignment


def distance_sweep(cfg: SimConfig, distances=SWEEP_DISTANCES_M,
                   per_distance: int = 8) -> list:
    """Scenarios with the SmartBAN device pinned at set distances.

    Interferer count spans 0 to max_devices - 1 as usual; every sweep
    record belongs to the test split by construction.
    """
    scenarios = []
    index = 0
    for d in distances:
        if d < 1.0:
            raise ValueError("sweep distances start at 1 m")
        for _ in range(per_distance):
            scenarios.append(sample_scenario(cfg, index, stream=1,
                                             pin_first_distance=float(d)))
            index += 1
    return scenarios
