"""Stratified k-fold splitting, cross-validation, and grid search.

The 5-fold default and the per-family grids are artifact defaults; selection
goes to the cell maximizing the chosen metric, earlier grid order on ties.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .classifiers import make_estimator
from .exceptions import TooFewInstances
from .metrics import EvalReport, evaluate
from .parallel import parallel_map

logger = logging.getLogger(__name__)

DEFAULT_FOLDS = 5
SELECTION_METRICS = ("accuracy", "weighted-f1")


def stratified_kfold(labels, k_folds: int, seed: int) -> np.ndarray:
    """Fold index per instance; class proportions per fold are off by at most one.

    Instances of each class are shuffled with the seed, then dealt round-robin.
    """
    labels = np.asarray(labels, dtype=int)
    if k_folds < 2:
        raise ValueError("k_folds must be >= 2")
    if labels.size < k_folds:
        raise TooFewInstances(f"{labels.size} instance(s) cannot fill {k_folds} folds")
    rng = np.random.Generator(np.random.PCG64(seed))
    folds = np.empty(labels.size, dtype=int)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        rng.shuffle(idx)
        folds[idx] = np.arange(idx.size) % k_folds
    return folds


def iter_folds(folds: np.ndarray, k_folds: int):
    for f in range(k_folds):
        test = np.flatnonzero(folds == f)
        train = np.flatnonzero(folds != f)
        yield train, test


def cross_val_predict(
    family: str,
    params: dict,
    X,
    y,
    n_classes: int,
    k_folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    jobs: int = 1,
) -> np.ndarray:
    """Out-of-fold predictions for every instance (pooled CV protocol)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    folds = stratified_kfold(y, k_folds, seed)
    predictions = np.empty(y.size, dtype=int)

    def run(split):
        train, test = split
        est = make_estimator(family, params, seed=seed)
        est.fit(X[train], y[train], n_classes=n_classes)
        return test, est.predict(X[test])

    for test, pred in parallel_map(run, list(iter_folds(folds, k_folds)), jobs=jobs):
        predictions[test] = pred
    return predictions


def cross_validate(
    family: str,
    params: dict,
    X,
    y,
    n_classes: int,
    k_folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    jobs: int = 1,
) -> tuple[list[float], list[float]]:
    """Per-fold (accuracy, weighted F1) on the held-out fold."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    folds = stratified_kfold(y, k_folds, seed)

    def run(split):
        train, test = split
        est = make_estimator(family, params, seed=seed)
        est.fit(X[train], y[train], n_classes=n_classes)
        rep = evaluate(y[test], est.predict(X[test]), n_classes)
        return rep.accuracy, rep.weighted_f1

    scores = parallel_map(run, list(iter_folds(folds, k_folds)), jobs=jobs)
    return [s[0] for s in scores], [s[1] for s in scores]


@dataclass(frozen=True)
class GridCell:
    params: dict
    fold_accuracy: tuple[float, ...]
    fold_weighted_f1: tuple[float, ...]

    @property
    def mean_accuracy(self) -> float:
        return float(np.mean(self.fold_accuracy))

    @property
    def mean_weighted_f1(self) -> float:
        return float(np.mean(self.fold_weighted_f1))

    def score(self, metric: str) -> float:
        return self.mean_accuracy if metric == "accuracy" else self.mean_weighted_f1


@dataclass(frozen=True)
class GridSearchResult:
    cells: tuple[GridCell, ...]
    selected_index: int
    metric: str
    seed: int
    k_folds: int

    @property
    def selected(self) -> GridCell:
        return self.cells[self.selected_index]

    @property
    def best_params(self) -> dict:
        return dict(self.selected.params)

    def to_dict(self) -> dict:
        return {
            "fmt": "session-miner-gridsearch",
            "v": 1,
            "metric": self.metric,
            "seed": self.seed,
            "k_folds": self.k_folds,
            "selected_index": self.selected_index,
            "cells": [
                {
                    "params": cell.params,
                    "mean_accuracy": cell.mean_accuracy,
                    "mean_weighted_f1": cell.mean_weighted_f1,
                    "fold_accuracy": list(cell.fold_accuracy),
                    "fold_weighted_f1": list(cell.fold_weighted_f1),
                }
                for cell in self.cells
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"


def grid_search(
    family: str,
    grid: Sequence[dict],
    X,
    y,
    n_classes: int,
    k_folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    metric: str = "accuracy",
    jobs: int = 1,
) -> GridSearchResult:
    """Evaluate every grid cell by stratified k-fold CV; pick the best, first on ties."""
    if not grid:
        raise ValueError("grid must contain at least one cell")
    if metric not in SELECTION_METRICS:
        raise ValueError(f"selection metric must be one of {SELECTION_METRICS}")

    def run(cell_params: dict) -> GridCell:
        try:
            acc, wf1 = cross_validate(family, cell_params, X, y, n_classes, k_folds, seed)
        except Exception as exc:
            raise type(exc)(f"grid cell {cell_params!r}: {exc}") from exc
        return GridCell(dict(cell_params), tuple(acc), tuple(wf1))

    cells = parallel_map(run, list(grid), jobs=jobs)
    best = 0
    for i, cell in enumerate(cells):
        if cell.score(metric) > cells[best].score(metric):
            best = i
    logger.info("grid search over %d cells selected %r", len(cells), cells[best].params)
    return GridSearchResult(tuple(cells), best, metric, seed, k_folds)


def default_grid(family: str) -> list[dict]:
    """Artifact-default hyperparameter grids (kept small for desk-scale runs)."""
    if family == "dt":
        return [
            {"max_depth": depth, "min_leaf": leaf}
            for depth in (3, 5, 10, None)
            for leaf in (1, 3)
        ]
    if family == "rf":
        return [
            {"n_trees": 25, "max_depth": depth, "min_leaf": 1}
            for depth in (None, 10)
        ]
    if family == "lr":
        return [
            {"l2": l2, "lr": 0.5, "max_iter": 500}
            for l2 in (0.0, 1e-3, 1e-1)
        ]
    if family == "svm":
        return [{"C": c, "epochs": 50} for c in (0.1, 1.0, 10.0)]
    if family == "nb":
        return [{}]
    if family == "mlp":
        return [
            {"hidden": h, "lr": 0.3, "epochs": 300, "l2": 1e-4}
            for h in (8, 16)
        ]
    raise ValueError(f"unknown model family {family!r}")


def evaluate_cv(
    family: str,
    params: dict,
    X,
    y,
    n_classes: int,
    class_names=None,
    k_folds: int = DEFAULT_FOLDS,
    seed: int = 0,
    jobs: int = 1,
) -> EvalReport:
    """One pooled EvalReport from out-of-fold predictions."""
    pred = cross_val_predict(family, params, X, y, n_classes, k_folds, seed, jobs)
    return evaluate(
        y,
        pred,
        n_classes,
        class_names=class_names,
        protocol=f"{k_folds}-fold stratified CV (pooled), seed {seed}",
    )
