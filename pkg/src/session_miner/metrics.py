"""Per-class precision/recall/F1, weighted averages, accuracy, confusion matrix.

Zero-denominator precision/recall are defined as 0; weighted averages use
gold-class support as weights.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .exceptions import EmptyInput, LengthMismatch

REPORT_FORMAT = "session-miner-report"


@dataclass(frozen=True)
class EvalReport:
    confusion: tuple[tuple[int, ...], ...]  # rows gold, columns predicted
    precision: tuple[float, ...]
    recall: tuple[float, ...]
    f1: tuple[float, ...]
    weighted_precision: float
    weighted_recall: float
    weighted_f1: float
    accuracy: float
    supports: tuple[int, ...]
    class_names: tuple[str, ...] | None = None
    protocol: str = ""

    @property
    def n_classes(self) -> int:
        return len(self.supports)

    def to_dict(self) -> dict:
        return {
            "fmt": REPORT_FORMAT,
            "v": 1,
            "protocol": self.protocol,
            "class_names": list(self.class_names) if self.class_names else None,
            "confusion": [list(row) for row in self.confusion],
            "per_class": {
                "precision": list(self.precision),
                "recall": list(self.recall),
                "f1": list(self.f1),
            },
            "weighted": {
                "precision": self.weighted_precision,
                "recall": self.weighted_recall,
                "f1": self.weighted_f1,
            },
            "accuracy": self.accuracy,
            "supports": list(self.supports),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def evaluate(
    gold,
    predicted,
    n_classes: int,
    class_names: Sequence[str] | None = None,
    protocol: str = "",
) -> EvalReport:
    gold = np.asarray(gold, dtype=int)
    predicted = np.asarray(predicted, dtype=int)
    if gold.shape != predicted.shape:
        raise LengthMismatch("gold and predicted labels differ in length")
    if gold.size == 0:
        raise EmptyInput("nothing to evaluate")
    if gold.min() < 0 or gold.max() >= n_classes or predicted.min() < 0 or predicted.max() >= n_classes:
        raise ValueError("labels out of range")

    cm = np.zeros((n_classes, n_classes), dtype=int)
    np.add.at(cm, (gold, predicted), 1)

    tp = np.diag(cm).astype(float)
    support = cm.sum(axis=1).astype(float)
    pred_count = cm.sum(axis=0).astype(float)
    with np.errstate(invalid="ignore", divide="ignore"):
        precision = np.where(pred_count > 0, tp / np.maximum(pred_count, 1), 0.0)
        recall = np.where(support > 0, tp / np.maximum(support, 1), 0.0)
    pr = precision + recall
    f1 = np.where(pr > 0, 2 * precision * recall / np.maximum(pr, 1e-300), 0.0)

    total = float(gold.size)
    weights = support / total
    return EvalReport(
        confusion=tuple(tuple(int(v) for v in row) for row in cm),
        precision=tuple(float(p) for p in precision),
        recall=tuple(float(r) for r in recall),
        f1=tuple(float(v) for v in f1),
        weighted_precision=float(np.sum(weights * precision)),
        weighted_recall=float(np.sum(weights * recall)),
        weighted_f1=float(np.sum(weights * f1)),
        accuracy=float(tp.sum() / total),
        supports=tuple(int(s) for s in cm.sum(axis=1)),
        class_names=tuple(class_names) if class_names else None,
        protocol=protocol,
    )


def report_table(rows: Sequence[tuple[str, EvalReport]]) -> str:
    """Aligned text table, one row per model family.

    Columns: per-class P/R/F1 for every class, weighted-average P/R/F1, and
    overall accuracy.
    """
    if not rows:
        return ""
    first = rows[0][1]
    names = first.class_names or tuple(f"class{i}" for i in range(first.n_classes))
    groups = [n.capitalize() for n in names] + ["Weighted average"]
    header_cells = ["Method"] + [m for _ in groups for m in ("P", "R", "F1")] + ["Accu"]

    body = []
    for family, rep in rows:
        cells = [family]
        for i in range(rep.n_classes):
            cells += [f"{rep.precision[i]:.3f}", f"{rep.recall[i]:.3f}", f"{rep.f1[i]:.3f}"]
        cells += [
            f"{rep.weighted_precision:.3f}",
            f"{rep.weighted_recall:.3f}",
            f"{rep.weighted_f1:.3f}",
            f"{rep.accuracy:.3f}",
        ]
        body.append(cells)

    widths = [max(len(header_cells[i]), *(len(r[i]) for r in body)) for i in range(len(header_cells))]
    group_line = " " * (widths[0] + 2)
    for gi, group in enumerate(groups):
        span = sum(widths[1 + 3 * gi : 4 + 3 * gi]) + 4
        group_line += group.ljust(span)
    lines = [group_line.rstrip()]
    for cells in [header_cells] + body:
        lines.append("  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip())
    return "\n".join(lines) + "\n"
