"""Segmentation quality metrics over technology code masks.

All metrics work on uint8 masks holding the Technology codes. The confusion
matrix is 5 x 5 with rows as truth and columns as prediction, ordered
Unknown, WLAN, Bluetooth, ZigBee, SmartBAN. Per-class scores are None for
classes absent from both masks, and mean scores average only the defined
classes. Boundary F1 follows the usual recipe: boundary pixels are the mask
minus its 3 x 3 erosion, and a boundary pixel counts as matched when the
other mask has a boundary pixel within a Chebyshev distance tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ismsim.waveforms import CLASS_ORDER, Technology

_N = len(CLASS_ORDER)
_CODE_TO_INDEX = np.full(256, -1, dtype=np.int64)
for _i, _tech in enumerate(CLASS_ORDER):
    _CODE_TO_INDEX[int(_tech)] = _i


def _indices(mask: np.ndarray) -> np.ndarray:
    idx = _CODE_TO_INDEX[np.asarray(mask, dtype=np.uint8).ravel()]
    if idx.min(initial=0) < 0:
        bad = sorted(set(np.asarray(mask).ravel()) - {int(t) for t in CLASS_ORDER})
        raise ValueError(f"mask holds non-code values {bad}")
    return idx


def confusion_matrix(truth: np.ndarray, pred: np.ndarray) -> np.ndarray:
    """Counts of (truth class, predicted class) pairs, shape (5, 5), int64."""
    t = _indices(truth)
    p = _indices(pred)
    if t.shape != p.shape:
        raise ValueError("truth and prediction sizes differ")
    return np.bincount(t * _N + p, minlength=_N * _N).reshape(_N, _N)


def accuracy_from_confusion(cm: np.ndarray) -> float:
    total = cm.sum()
    return float(np.trace(cm) / total) if total else float("nan")


def iou_dice_from_confusion(cm: np.ndarray):
    """Per-class IoU and Dice dicts. Classes with no truth or predicted
    pixels come back as None."""
    tp = np.diag(cm).astype(np.float64)
    fp = cm.sum(axis=0) - tp
    fn = cm.sum(axis=1) - tp
    iou = {}
    dice = {}
    for i, tech in enumerate(CLASS_ORDER):
        union = tp[i] + fp[i] + fn[i]
        if union == 0:
            iou[tech] = None
            dice[tech] = None
        else:
            iou[tech] = float(tp[i] / union)
            dice[tech] = float(2.0 * tp[i] / (2.0 * tp[i] + fp[i] + fn[i]))
    return iou, dice


def weighted_f1_from_confusion(cm: np.ndarray) -> float:
    """F1 per class averaged with truth-support weights."""
    tp = np.diag(cm).astype(np.float64)
    fp = cm.sum(axis=0) - tp
    support = cm.sum(axis=1).astype(np.float64)
    fn = support - tp
    total = support.sum()
    if total == 0:
        return float("nan")
    score = 0.0
    for i in range(_N):
        if support[i] == 0:
            continue
        score += support[i] * 2.0 * tp[i] / (2.0 * tp[i] + fp[i] + fn[i])
    return float(score / total)


def _mean_defined(values: dict) -> float:
    defined = [v for v in values.values() if v is not None]
    return float(np.mean(defined)) if defined else float("nan")


def _boundary(mask: np.ndarray) -> np.ndarray:
    if not mask.any():
        return mask
    eroded = ndimage.binary_erosion(mask, structure=np.ones((3, 3), dtype=bool))
    return mask & ~eroded


def boundary_f1(truth: np.ndarray, pred: np.ndarray,
                tolerance: int = 2) -> dict:
    """Per-class boundary F1 with a Chebyshev matching tolerance in pixels."""
    truth = np.asarray(truth)
    pred = np.asarray(pred)
    if truth.shape != pred.shape or truth.ndim != 2:
        raise ValueError("masks must be equal-shape 2-d arrays")
    footprint = np.ones((2 * tolerance + 1,) * 2, dtype=bool)
    out = {}
    for tech in CLASS_ORDER:
        bt = _boundary(truth == int(tech))
        bp = _boundary(pred == int(tech))
        if not bt.any() and not bp.any():
            out[tech] = None
            continue
        if not bt.any() or not bp.any():
            out[tech] = 0.0
            continue
        near_t = ndimage.binary_dilation(bt, structure=footprint)
        near_p = ndimage.binary_dilation(bp, structure=footprint)
        precision = (bp & near_t).sum() / bp.sum()
        recall = (bt & near_p).sum() / bt.sum()
        if precision + recall == 0.0:
            out[tech] = 0.0
        else:
            out[tech] = float(2.0 * precision * recall / (precision + recall))
    return out


@dataclass
class SegMetrics:
    confusion: np.ndarray
    accuracy: float
    iou: dict
    dice: dict
    mean_iou: float
    mean_dice: float
    weighted_f1: float
    boundary: dict
    mean_boundary_f1: float


def compute_metrics(truth: np.ndarray, pred: np.ndarray,
                    boundary_tolerance: int = 2) -> SegMetrics:
    cm = confusion_matrix(truth, pred)
    iou, dice = iou_dice_from_confusion(cm)
    bf1 = boundary_f1(truth, pred, tolerance=boundary_tolerance)
    return SegMetrics(
        confusion=cm,
        accuracy=accuracy_from_confusion(cm),
        iou=iou,
        dice=dice,
        mean_iou=_mean_defined(iou),
        mean_dice=_mean_defined(dice),
        weighted_f1=weighted_f1_from_confusion(cm),
        boundary=bf1,
        mean_boundary_f1=_mean_defined(bf1),
    )
