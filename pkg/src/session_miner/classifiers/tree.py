"""CART-style decision tree on axis-aligned thresholds with Gini impurity.

Fully deterministic: split candidates are midpoints between consecutive
distinct sorted values, ties broken by (lower feature index, lower threshold).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import AllZero
from .base import BaseClassifier, check_array, check_X_y


def gini(counts) -> float:
    """1 - sum(p_i^2) for class counts; impurity of a node."""
    counts = np.asarray(counts, dtype=float)
    if np.any(counts < 0):
        raise ValueError("counts must be >= 0")
    total = counts.sum()
    if total == 0:
        raise AllZero("gini of an empty distribution")
    p = counts / total
    return float(1.0 - np.sum(p * p))


@dataclass
class TreeNode:
    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    counts: np.ndarray | None = None  # leaf class counts

    @property
    def is_leaf(self) -> bool:
        return self.counts is not None


def best_split(X, y, n_classes, feature_ids, min_leaf):
    """Best (weighted-gini, feature, threshold) over candidate features, or None.

    feature_ids must be in ascending order so the lower-index tie-break holds.
    """
    n = len(y)
    onehot = np.eye(n_classes)[y]
    best = None
    for f in feature_ids:
        x = X[:, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        cum = np.cumsum(onehot[order], axis=0)
        cut = np.nonzero(xs[:-1] < xs[1:])[0]  # split between position i and i+1
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        ok = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not np.any(ok):
            continue
        cut, n_left, n_right = cut[ok], n_left[ok], n_right[ok]
        left = cum[cut]
        right = cum[-1] - left
        g_left = 1.0 - np.sum(left * left, axis=1) / (n_left * n_left)
        g_right = 1.0 - np.sum(right * right, axis=1) / (n_right * n_right)
        weighted = (n_left * g_left + n_right * g_right) / n
        j = int(np.argmin(weighted))  # first minimum = lowest threshold
        if best is None or weighted[j] < best[0]:
            lo, hi = float(xs[cut[j]]), float(xs[cut[j] + 1])
            threshold = (lo + hi) / 2.0
            if threshold >= hi:  # adjacent floats: midpoint rounded up, keep the cut left-closed
                threshold = lo
            best = (float(weighted[j]), int(f), threshold)
    return best


def grow_tree(X, y, n_classes, max_depth, min_leaf, feature_sampler=None) -> TreeNode:
    """Depth-first tree construction with an explicit stack (trees can get
    deeper than the interpreter recursion limit on noisy data)."""
    root = TreeNode()
    stack = [(root, np.arange(len(y)), 0)]
    while stack:
        node, idx, depth = stack.pop()
        counts = np.bincount(y[idx], minlength=n_classes)
        if (
            (max_depth is not None and depth >= max_depth)
            or idx.size < 2 * min_leaf
            or counts.max() == idx.size  # pure node
        ):
            node.counts = counts
            continue
        if feature_sampler is None:
            feature_ids = np.arange(X.shape[1])
        else:
            feature_ids = feature_sampler()
        split = best_split(X[idx], y[idx], n_classes, feature_ids, min_leaf)
        if split is None:
            node.counts = counts
            continue
        _, f, threshold = split
        node.feature, node.threshold = f, threshold
        node.left, node.right = TreeNode(), TreeNode()
        mask = X[idx, f] <= threshold
        # push right first so the left child is grown first (same order as the
        # recursive formulation; keeps per-tree rng call order deterministic)
        stack.append((node.right, idx[~mask], depth + 1))
        stack.append((node.left, idx[mask], depth + 1))
    return root


def tree_apply(node: TreeNode, X: np.ndarray, n_classes: int) -> np.ndarray:
    """Per-row leaf class frequencies."""
    out = np.zeros((X.shape[0], n_classes))
    stack = [(node, np.arange(X.shape[0]))]
    while stack:
        cur, idx = stack.pop()
        if idx.size == 0:
            continue
        if cur.is_leaf:
            total = cur.counts.sum()
            out[idx] = cur.counts / total if total else 1.0 / n_classes
            continue
        mask = X[idx, cur.feature] <= cur.threshold
        stack.append((cur.left, idx[mask]))
        stack.append((cur.right, idx[~mask]))
    return out


class DecisionTreeClassifier(BaseClassifier):
    """Binary CART classifier. Scale-invariant, no randomness."""

    def __init__(self, max_depth: int | None = None, min_leaf: int = 1):
        self.max_depth = max_depth
        self.min_leaf = min_leaf

    def fit(self, X, y, n_classes: int | None = None):
        X, y, k = check_X_y(X, y, n_classes)
        if self.min_leaf < 1:
            raise ValueError("min_leaf must be >= 1")
        self.n_classes_ = k
        self.root_ = grow_tree(X, y, k, self.max_depth, self.min_leaf)
        return self

    def predict_scores(self, X) -> np.ndarray:
        self._check_is_fitted()
        return tree_apply(self.root_, check_array(X), self.n_classes_)
