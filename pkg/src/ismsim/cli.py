"""Command line front end.

Subcommands:

    generate    sample and render a dataset of labeled spectrogram records
    sweep       render the pinned-distance SmartBAN sweep
    render      re-render one record from its .meta file
    eval        score stored prediction masks, or the classical detector,
                against a dataset split
    export-png  write a viewable PNG of a stored record

`generate` and `sweep` accept a JSON config file whose keys mirror the
simulation config fields; explicit command line flags win over file values.
"""
from __future__ import annotations

import argparse
import json
import math
from pathlib import Path

import numpy as np

from ismsim.baseline import segment_image
from ismsim.dataset_io import (
    export_png,
    generate_dataset,
    generate_sweep_dataset,
    image_to_bytes,
    load_manifest,
    load_record,
    mask_from_bytes,
    mask_to_bytes,
    record_stem,
    render_from_meta,
    save_report,
)
from ismsim.metrics import (
    accuracy_from_confusion,
    compute_metrics,
    iou_dice_from_confusion,
    weighted_f1_from_confusion,
)
from ismsim.scene import SimConfig
from ismsim.waveforms import CLASS_ORDER


def _sim_config(args) -> SimConfig:
    values = {}
    if args.config:
        values.update(json.loads(Path(args.config).read_text()))
    overrides = {
        "master_seed": args.seed,
        "num_records": getattr(args, "records", None),
        "min_devices": args.min_devices,
        "max_devices": args.max_devices,
        "cell_radius_m": args.radius,
        "noise": args.noise,
    }
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    if "splits" in values:
        values["splits"] = tuple((name, frac) for name, frac in values["splits"])
    return SimConfig(**values)


def _add_sim_options(parser, with_records: bool):
    parser.add_argument("--out", required=True, help="dataset directory")
    parser.add_argument("--config", help="JSON file of simulation settings")
    parser.add_argument("--seed", type=int, help="master seed")
    if with_records:
        parser.add_argument("--records", type=int, help="number of records")
    parser.add_argument("--min-devices", type=int, dest="min_devices")
    parser.add_argument("--max-devices", type=int, dest="max_devices")
    parser.add_argument("--radius", type=float, help="cell radius in meters")
    parser.add_argument("--noise", action=argparse.BooleanOptionalAction,
                        default=None, help="thermal noise on or off")
    parser.add_argument("--jobs", type=int, default=1,
                        help="worker processes for rendering")


def _cmd_generate(args) -> int:
    cfg = _sim_config(args)
    manifest = generate_dataset(cfg, args.out, jobs=args.jobs)
    counts: dict = {}
    for rec in manifest["records"]:
        counts[rec["split"]] = counts.get(rec["split"], 0) + 1
    summary = ", ".join(f"{name} {n}" for name, n in sorted(counts.items()))
    print(f"wrote {manifest['num_records']} records to {args.out} ({summary})")
    return 0


def _cmd_sweep(args) -> int:
    cfg = _sim_config(args)
    distances = None
    if args.distances:
        distances = tuple(float(tok) for tok in args.distances.split(","))
    manifest = generate_sweep_dataset(cfg, args.out, distances=distances,
                                     per_distance=args.per_distance,
                                     jobs=args.jobs)
    sweep = manifest["sweep"]
    print(f"wrote {manifest['num_records']} sweep records to {args.out} "
          f"({len(sweep['distances'])} distances x {sweep['per_distance']})")
    return 0


def _cmd_render(args) -> int:
    meta = json.loads(Path(args.meta).read_text())
    out = render_from_meta(meta)
    stem = Path(args.out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    stem.with_suffix(".img").write_bytes(image_to_bytes(out.image))
    stem.with_suffix(".mask").write_bytes(mask_to_bytes(out.mask))
    if args.png:
        export_png(args.png, out.image, out.mask)
    print(f"rendered record {meta.get('index')} to {stem}.img / {stem}.mask")
    return 0


def _confusion_report(cm: np.ndarray, boundary_values=None) -> dict:
    iou, dice = iou_dice_from_confusion(cm)
    by_name = lambda d: {t.name: d[t] for t in CLASS_ORDER}  # noqa: E731
    defined = [v for v in iou.values() if v is not None]
    report = {
        "confusion": cm.tolist(),
        "class_order": [t.name for t in CLASS_ORDER],
        "accuracy": accuracy_from_confusion(cm),
        "iou": by_name(iou),
        "dice": by_name(dice),
        "mean_iou": float(np.mean(defined)) if defined else None,
        "mean_dice": float(np.mean([v for v in dice.values() if v is not None]))
                     if defined else None,
        "weighted_f1": weighted_f1_from_confusion(cm),
    }
    if boundary_values is not None:
        report["mean_boundary_f1"] = (float(np.mean(boundary_values))
                                      if boundary_values else None)
    return report


def _load_prediction(pred_root: Path, split: str, index: int,
                     size: int) -> np.ndarray:
    """Predicted mask for one record, from a split-mirrored or flat layout."""
    stem = record_stem(split, index)
    candidates = (pred_root / f"{stem}.mask", pred_root / f"{index:06d}.mask")
    for path in candidates:
        if path.exists():
            try:
                return mask_from_bytes(path.read_bytes(), size)
            except ValueError as err:
                raise SystemExit(f"bad mask file {path}: {err}") from err
    raise SystemExit(f"no predicted mask for record {index} under {pred_root}")


def _cmd_eval(args) -> int:
    manifest = load_manifest(args.dataset)
    records = [r for r in manifest["records"] if r["split"] == args.split]
    if not records:
        raise SystemExit(f"no records in split {args.split!r}")
    size = manifest["image_size"]
    total = np.zeros((len(CLASS_ORDER),) * 2, dtype=np.int64)
    boundary_values = []
    per_distance: dict = {}
    for rec in records:
        image, truth, meta = load_record(args.dataset, args.split,
                                         rec["index"], size)
        if args.pred:
            pred = _load_prediction(Path(args.pred), args.split,
                                    rec["index"], size)
        else:
            pred, _ = segment_image(image, threshold=args.threshold)
        m = compute_metrics(truth, pred, boundary_tolerance=args.bf_tolerance)
        total += m.confusion
        if not math.isnan(m.mean_boundary_f1):
            boundary_values.append(m.mean_boundary_f1)
        distance = rec.get("sweep_distance_m", meta.get("sweep_distance_m"))
        if distance is not None:
            per_distance.setdefault(float(distance),
                                    np.zeros_like(total))
            per_distance[float(distance)] += m.confusion

    report = {
        "split": args.split,
        "num_records": len(records),
        "source": args.pred if args.pred else args.segmenter,
        "aggregate": _confusion_report(total, boundary_values),
    }
    if per_distance:
        report["per_distance"] = {
            f"{d:g}": _confusion_report(cm) for d, cm in sorted(per_distance.items())
        }
    out_path = Path(args.report) if args.report else (
        Path(args.dataset) / f"report-{args.split}.json")
    save_report(out_path, report)
    agg = report["aggregate"]
    mean_iou = agg["mean_iou"]
    print(f"split {args.split}: {len(records)} records, "
          f"accuracy {agg['accuracy']:.4f}, "
          f"mean IoU {mean_iou if mean_iou is None else round(mean_iou, 4)}, "
          f"weighted F1 {agg['weighted_f1']:.4f}")
    print(f"report written to {out_path}")
    return 0


def _cmd_export_png(args) -> int:
    manifest = load_manifest(args.dataset)
    image, truth, _ = load_record(args.dataset, args.split, args.index,
                                  manifest["image_size"])
    mask = None
    if args.overlay == "truth":
        mask = truth
    elif args.overlay == "baseline":
        mask, _ = segment_image(image)
    export_png(args.out, image, mask, colormap=args.colormap)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ismsim",
        description="2.4 GHz coexistence scenes: simulate, label, evaluate")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="render a labeled dataset")
    _add_sim_options(p, with_records=True)
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("sweep", help="render the SmartBAN distance sweep")
    _add_sim_options(p, with_records=False)
    p.add_argument("--distances", help="comma-separated distances in meters")
    p.add_argument("--per-distance", type=int, default=8, dest="per_distance")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("render", help="re-render one record from metadata")
    p.add_argument("--meta", required=True, help="path to a .meta file")
    p.add_argument("--out", required=True, help="output stem for .img/.mask")
    p.add_argument("--png", help="also write this PNG")
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("eval",
                       help="score prediction masks or the classical detector")
    p.add_argument("--dataset", "--gt", dest="dataset", required=True,
                   help="ground-truth dataset root")
    p.add_argument("--split", default="test")
    p.add_argument("--pred",
                   help="directory of predicted .mask files; omit to run "
                        "the built-in segmenter instead")
    p.add_argument("--segmenter", choices=("baseline",), default="baseline",
                   help="detector used when --pred is not given")
    p.add_argument("--threshold", type=float,
                   help="fixed detector threshold instead of Otsu")
    p.add_argument("--bf-tolerance", type=int, default=2, dest="bf_tolerance",
                   help="boundary F1 matching tolerance in cells")
    p.add_argument("--report", help="output JSON path")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("export-png", help="write a PNG view of a record")
    p.add_argument("--dataset", required=True)
    p.add_argument("--split", default="train")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", choices=("truth", "baseline", "none"),
                   default="truth")
    p.add_argument("--colormap", default="viridis")
    p.set_defaults(func=_cmd_export_png)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
