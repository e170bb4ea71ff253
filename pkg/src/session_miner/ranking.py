"""Information-gain feature ranking.

Each continuous feature is discretized at the single threshold that maximizes
information gain (exhaustive scan over midpoints between consecutive distinct
sorted values); entropy is base 2, so gains are in bits. The scan depends only
on value order, making the gain invariant under strictly monotone transforms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .catalogs import FeatureCatalog
from .exceptions import SingleClass

RANKING_FORMAT = "session-miner-ranking"


def entropy(counts) -> float:
    counts = np.asarray(counts, dtype=float)
    total = counts.sum()
    if total == 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def best_split_gain(x, y, n_classes: int) -> float:
    """Max information gain of thresholding feature x; 0 for constant features."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    cum = np.cumsum(np.eye(n_classes)[y[order]], axis=0)
    cut = np.nonzero(xs[:-1] < xs[1:])[0]
    if cut.size == 0:
        return 0.0
    n = y.size
    total = cum[-1]
    h_label = entropy(total)
    left = cum[cut]
    right = total - left
    n_left = (cut + 1).astype(float)
    n_right = n - n_left

    def h(counts, sizes):
        with np.errstate(divide="ignore", invalid="ignore"):
            p = counts / sizes[:, None]
            logp = np.where(p > 0, np.log2(np.maximum(p, 1e-300)), 0.0)
        return -np.sum(p * logp, axis=1)

    cond = (n_left * h(left, n_left) + n_right * h(right, n_right)) / n
    return float(max(0.0, h_label - cond.min()))


@dataclass(frozen=True)
class RankedFeature:
    name: str
    category: str
    gain: float


@dataclass(frozen=True)
class FeatureRanking:
    entries: tuple[RankedFeature, ...]

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "fmt": RANKING_FORMAT,
            "v": 1,
            "entries": [
                {"feature": e.name, "category": e.category, "information_gain": e.gain}
                for e in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def table(self) -> str:
        width = max(len(e.name) for e in self.entries)
        cat_width = max(len(e.category) for e in self.entries)
        lines = [f"{'rank':>4}  {'feature'.ljust(width)}  {'category'.ljust(cat_width)}  gain"]
        for i, e in enumerate(self.entries, start=1):
            lines.append(f"{i:>4}  {e.name.ljust(width)}  {e.category.ljust(cat_width)}  {e.gain:.4f}")
        return "\n".join(lines) + "\n"


def information_gain_ranking(X, y, catalog: FeatureCatalog) -> FeatureRanking:
    """Rank every catalog feature by IG, descending; name is the tie-break key."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if np.unique(y).size < 2:
        raise SingleClass("information gain needs at least two distinct labels")
    n_classes = int(y.max()) + 1
    ranked = [
        RankedFeature(entry.name, entry.category, best_split_gain(X[:, i], y, n_classes))
        for i, entry in enumerate(catalog.entries)
    ]
    ranked.sort(key=lambda e: (-e.gain, e.name))
    return FeatureRanking(tuple(ranked))
