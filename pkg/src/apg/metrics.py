"""Pixel-wise evaluation of binary masks: OA, precision, recall, F1, IoU.

Ratios live in [0, 1]; the human-readable summary renders percentages.
Any ratio whose denominator is zero reports 0 and is listed in the
report's ``degenerate`` field so empty-foreground images cannot silently
inflate corpus scores. Corpus aggregation is a micro-average: confusion
counts are summed across images, then the ratios are recomputed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .raster import BinaryMask, DimensionMismatchError

__all__ = ["MetricsReport", "evaluate", "aggregate", "write_metrics_csv", "format_summary"]

_RATIO_COLUMNS = ("oa", "precision", "recall", "f1", "iou")


@dataclass(frozen=True)
class MetricsReport:
    tp: int
    fp: int
    fn: int
    tn: int
    oa: float
    precision: float
    recall: float
    f1: float
    iou: float
    degenerate: tuple[str, ...] = ()

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "MetricsReport":
        degenerate = []

        def ratio(name: str, num: int, den: int) -> float:
            if den == 0:
                degenerate.append(name)
                return 0.0
            return num / den

        oa = ratio("oa", tp + tn, tp + fp + fn + tn)
        precision = ratio("precision", tp, tp + fp)
        recall = ratio("recall", tp, tp + fn)
        if precision + recall == 0.0:
            degenerate.append("f1")
            f1 = 0.0
        else:
            f1 = 2.0 * precision * recall / (precision + recall)
        iou = ratio("iou", tp, tp + fp + fn)
        return cls(tp, fp, fn, tn, oa, precision, recall, f1, iou, tuple(degenerate))


def evaluate(pred: BinaryMask, gt: BinaryMask) -> MetricsReport:
    """Confusion counts and ratios with foreground as the positive class."""
    if (pred.width, pred.height) != (gt.width, gt.height):
        raise DimensionMismatchError(
            f"prediction {pred.width}x{pred.height} does not match ground truth {gt.width}x{gt.height}"
        )
    p = pred.values != 0
    g = gt.values != 0
    tp = int(np.count_nonzero(p & g))
    fp = int(np.count_nonzero(p & ~g))
    fn = int(np.count_nonzero(~p & g))
    tn = int(np.count_nonzero(~p & ~g))
    return MetricsReport.from_counts(tp, fp, fn, tn)


def aggregate(reports: Sequence[MetricsReport]) -> MetricsReport:
    """Micro-average: sum the counts, recompute the ratios."""
    if not reports:
        raise ValueError("cannot aggregate zero reports")
    return MetricsReport.from_counts(
        sum(r.tp for r in reports),
        sum(r.fp for r in reports),
        sum(r.fn for r in reports),
        sum(r.tn for r in reports),
    )


def write_metrics_csv(per_image: Sequence[tuple[str, MetricsReport]], path) -> None:
    """Per-image rows plus a final ``__total__`` micro-average row."""
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_id", "tp", "fp", "fn", "tn", *_RATIO_COLUMNS])
        for image_id, r in per_image:
            writer.writerow(_row(image_id, r))
        if per_image:
            writer.writerow(_row("__total__", aggregate([r for _, r in per_image])))


def _row(image_id: str, r: MetricsReport) -> list:
    return [
        image_id,
        r.tp,
        r.fp,
        r.fn,
        r.tn,
        *(f"{getattr(r, name):.6f}" for name in _RATIO_COLUMNS),
    ]


def format_summary(r: MetricsReport) -> str:
    """One-line summary with percentages, two decimals."""
    labels = (("oa", "OA"), ("precision", "Precision"), ("recall", "Recall"), ("f1", "F1"), ("iou", "IoU"))
    parts = [f"{label}={getattr(r, name) * 100:.2f}%" for name, label in labels]
    flags = f" degenerate={','.join(r.degenerate)}" if r.degenerate else ""
    return " ".join(parts) + flags
