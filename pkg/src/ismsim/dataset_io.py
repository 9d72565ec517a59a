"""Dataset serialization: raw image/mask records, metadata, manifests, PNG.

On-disk layout under a dataset root:

    manifest.json
    train/000000.img   float32 little-endian, row-major, size x size;
    train/000000.mask  uint8, same layout, technology codes;
    train/000000.meta  JSON scenario description, enough to re-render
    val/...  test/...

Row 0 of the raw arrays is the lowest frequency; columns advance in time.
PNG exports flip rows so frequency points up the way a spectrum display
does, and can tint pixels by their mask code.

A record's meta block captures every sampled quantity (placements, fading
draws configuration, seeds), so `render_from_meta` reproduces the stored
image and mask byte for byte. Generation with worker processes writes
exactly the same bytes as a sequential run, since every record depends only
on the master seed and its own index.
"""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ismsim.metrics import SegMetrics
from ismsim.scene import (
    DevicePlacement,
    RenderedScene,
    Scenario,
    SimConfig,
    assign_splits,
    distance_sweep,
    render_scene,
    sample_scenario,
)
from ismsim.spectrogram import StftConfig
from ismsim.waveforms import CLASS_ORDER, Technology

MANIFEST_VERSION = 1

IMAGE_DTYPE = np.dtype("<f4")
MASK_DTYPE = np.dtype("u1")

OVERLAY_COLORS = {
    Technology.WLAN: (110, 190, 255),
    Technology.BLUETOOTH: (170, 70, 220),
    Technology.ZIGBEE: (0, 205, 160),
    Technology.SMARTBAN: (255, 214, 0),
}


# ---------------------------------------------------------------------------
# raw record files


def image_to_bytes(image: np.ndarray) -> bytes:
    return np.ascontiguousarray(image, dtype=IMAGE_DTYPE).tobytes()


def mask_to_bytes(mask: np.ndarray) -> bytes:
    return np.ascontiguousarray(mask, dtype=MASK_DTYPE).tobytes()


def image_from_bytes(raw: bytes, size: int = 256) -> np.ndarray:
    return np.frombuffer(raw, dtype=IMAGE_DTYPE).reshape(size, size).copy()


def mask_from_bytes(raw: bytes, size: int = 256) -> np.ndarray:
    return np.frombuffer(raw, dtype=MASK_DTYPE).reshape(size, size).copy()


def record_stem(split: str, index: int) -> str:
    return f"{split}/{index:06d}"


def record_paths(root, split: str, index: int):
    stem = Path(root) / split / f"{index:06d}"
    return (stem.with_suffix(".img"), stem.with_suffix(".mask"),
            stem.with_suffix(".meta"))


def write_record(root, split: str, index: int, image: np.ndarray,
                 mask: np.ndarray, meta: dict) -> None:
    img_path, mask_path, meta_path = record_paths(root, split, index)
    img_path.parent.mkdir(parents=True, exist_ok=True)
    img_path.write_bytes(image_to_bytes(image))
    mask_path.write_bytes(mask_to_bytes(mask))
    meta_path.write_text(json.dumps(meta, indent=1, sort_keys=True))


def load_record(root, split: str, index: int, size: int = 256):
    img_path, mask_path, meta_path = record_paths(root, split, index)
    image = image_from_bytes(img_path.read_bytes(), size)
    mask = mask_from_bytes(mask_path.read_bytes(), size)
    meta = json.loads(meta_path.read_text())
    return image, mask, meta


# ---------------------------------------------------------------------------
# metadata


def meta_for(scn: Scenario, split: str, cfg: SimConfig,
             extra: dict | None = None) -> dict:
    meta = {
        "index": scn.index,
        "seed": scn.seed,
        "split": split,
        "sample_rate_hz": cfg.sample_rate,
        "time_span_s": cfg.time_span_s,
        "noise": cfg.noise,
        "noise_floor_dbm_per_hz": cfg.noise_floor_dbm_per_hz,
        "shadowing_sigma_db": cfg.shadowing_sigma_db,
        "devices": [
            {
                "technology": dev.technology.name,
                "distance_m": dev.distance_m,
                "x_m": dev.x_m,
                "y_m": dev.y_m,
                "los": dev.los,
                "k_factor": dev.k_factor,
                "path_loss_exponent": dev.path_loss_exponent,
                "slot_count": dev.slot_count,
                "center_offset_hz": dev.center_offset_hz,
            }
            for dev in scn.devices
        ],
    }
    if extra:
        meta.update(extra)
    return meta


def scenario_from_meta(meta: dict) -> Scenario:
    devices = tuple(
        DevicePlacement(
            technology=Technology[d["technology"]],
            distance_m=d["distance_m"], x_m=d["x_m"], y_m=d["y_m"],
            los=d["los"], k_factor=d["k_factor"],
            path_loss_exponent=d["path_loss_exponent"],
            slot_count=d["slot_count"],
            center_offset_hz=d["center_offset_hz"])
        for d in meta["devices"])
    return Scenario(index=meta["index"], seed=meta["seed"], devices=devices)


def render_from_meta(meta: dict,
                     stft_cfg: StftConfig | None = None) -> RenderedScene:
    """Re-render a stored record from its metadata alone."""
    cfg = SimConfig(
        master_seed=0,
        num_records=1,
        sample_rate=meta["sample_rate_hz"],
        time_span_s=meta["time_span_s"],
        noise=meta["noise"],
        noise_floor_dbm_per_hz=meta["noise_floor_dbm_per_hz"],
        shadowing_sigma_db=meta["shadowing_sigma_db"],
    )
    return render_scene(scenario_from_meta(meta), cfg, stft_cfg)


# ---------------------------------------------------------------------------
# manifests and dataset generation


def manifest_path(root) -> Path:
    return Path(root) / "manifest.json"


def write_manifest(root, manifest: dict) -> None:
    manifest_path(root).write_text(json.dumps(manifest, indent=1, sort_keys=True))


def load_manifest(root) -> dict:
    manifest = json.loads(manifest_path(root).read_text())
    version = manifest.get("format_version")
    if version != MANIFEST_VERSION:
        raise ValueError(f"unsupported manifest version {version!r}")
    return manifest


def _base_manifest(cfg: SimConfig, records, image_size: int) -> dict:
    config = asdict(cfg)
    config["splits"] = [list(pair) for pair in cfg.splits]  # JSON-stable form
    return {
        "format_version": MANIFEST_VERSION,
        "image_size": image_size,
        "image_dtype": "float32-le",
        "mask_dtype": "uint8",
        "num_records": len(records),
        "config": config,
        "records": records,
    }


def _render_job(args):
    scn, split, cfg, stft_cfg, extra = args
    out = render_scene(scn, cfg, stft_cfg)
    meta = meta_for(scn, split, cfg, extra)
    return scn.index, split, image_to_bytes(out.image), mask_to_bytes(out.mask), meta


def _run_jobs(job_args, root, jobs: int):
    if jobs <= 1:
        results = map(_render_job, job_args)
        for index, split, img, mask, meta in results:
            _write_raw(root, split, index, img, mask, meta)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for index, split, img, mask, meta in pool.map(_render_job, job_args,
                                                      chunksize=1):
            _write_raw(root, split, index, img, mask, meta)


def _write_raw(root, split, index, img_bytes, mask_bytes, meta):
    img_path, mask_path, meta_path = record_paths(root, split, index)
    img_path.parent.mkdir(parents=True, exist_ok=True)
    img_path.write_bytes(img_bytes)
    mask_path.write_bytes(mask_bytes)
    meta_path.write_text(json.dumps(meta, indent=1, sort_keys=True))


def generate_dataset(cfg: SimConfig, root, *, jobs: int = 1,
                     stft_cfg: StftConfig | None = None) -> dict:
    """Sample, render and write a full dataset; returns the manifest."""
    stft_cfg = stft_cfg or StftConfig()
    scenarios = [sample_scenario(cfg, i) for i in range(cfg.num_records)]
    splits = assign_splits(scenarios, cfg.splits)
    job_args = [(scn, split, cfg, stft_cfg, None)
                for scn, split in zip(scenarios, splits)]
    _run_jobs(job_args, root, jobs)
    records = [{"index": scn.index, "split": split,
                "stem": record_stem(split, scn.index)}
               for scn, split in zip(scenarios, splits)]
    manifest = _base_manifest(cfg, records, stft_cfg.image_size)
    write_manifest(root, manifest)
    return manifest


def generate_sweep_dataset(cfg: SimConfig, root, *, distances=None,
                           per_distance: int = 8, jobs: int = 1,
                           stft_cfg: StftConfig | None = None) -> dict:
    """Distance-sweep dataset: every record in the test split, with the
    SmartBAN link distance recorded in each record's metadata."""
    from ismsim.scene import SWEEP_DISTANCES_M

    stft_cfg = stft_cfg or StftConfig()
    distances = tuple(SWEEP_DISTANCES_M if distances is None else distances)
    scenarios = distance_sweep(cfg, distances, per_distance)
    job_args = [(scn, "test", cfg, stft_cfg,
                 {"sweep_distance_m": scn.devices[0].distance_m})
                for scn in scenarios]
    _run_jobs(job_args, root, jobs)
    records = [{"index": scn.index, "split": "test",
                "stem": record_stem("test", scn.index),
                "sweep_distance_m": scn.devices[0].distance_m}
               for scn in scenarios]
    manifest = _base_manifest(cfg, records, stft_cfg.image_size)
    manifest["sweep"] = {"distances": list(distances),
                         "per_distance": per_distance}
    write_manifest(root, manifest)
    return manifest


# ---------------------------------------------------------------------------
# reports and PNG export


def metrics_to_dict(m: SegMetrics) -> dict:
    def by_name(d):
        return {tech.name: d[tech] for tech in CLASS_ORDER}

    return {
        "confusion": m.confusion.tolist(),
        "class_order": [tech.name for tech in CLASS_ORDER],
        "accuracy": m.accuracy,
        "iou": by_name(m.iou),
        "dice": by_name(m.dice),
        "mean_iou": m.mean_iou,
        "mean_dice": m.mean_dice,
        "weighted_f1": m.weighted_f1,
        "boundary_f1": by_name(m.boundary),
        "mean_boundary_f1": m.mean_boundary_f1,
    }


def save_report(path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, indent=1, sort_keys=True))


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())


def export_png(path, image: np.ndarray, mask: np.ndarray | None = None, *,
               colormap: str = "viridis", overlay_alpha: float = 0.45) -> None:
    """Write a viewable PNG, frequency pointing up, optional mask tint."""
    # matplotlib only needed when actually exporting pictures
    from matplotlib import colormaps
    from PIL import Image

    rgba = colormaps[colormap](np.clip(np.asarray(image, dtype=np.float64), 0, 1))
    rgb = np.round(rgba[..., :3] * 255.0).astype(np.uint8)
    if mask is not None:
        if mask.shape != rgb.shape[:2]:
            raise ValueError("mask and image sizes differ")
        blend = rgb.astype(np.float64)
        for tech, color in OVERLAY_COLORS.items():
            sel = mask == int(tech)
            blend[sel] = (overlay_alpha * np.array(color, dtype=np.float64)
                          + (1.0 - overlay_alpha) * blend[sel])
        rgb = np.round(blend).astype(np.uint8)
    Image.fromarray(np.flipud(rgb)).save(Path(path))
