"""Random forest over the CART trees: bootstrap rows, random feature subsets per split.

Tree i uses its own generator seeded with seed + i, so the forest is
reproducible and trees can be built concurrently.
"""
from __future__ import annotations

import math

import numpy as np

from ..parallel import parallel_map
from .base import BaseClassifier, check_array, check_X_y
from .tree import grow_tree, tree_apply


class RandomForestClassifier(BaseClassifier):
    def __init__(
        self,
        n_trees: int = 25,
        max_depth: int | None = None,
        min_leaf: int = 1,
        mtry: int | None = None,
        seed: int = 0,
        bootstrap: bool = True,
    ):
        self.n_trees = n_trees
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.mtry = mtry  # None = ceil(sqrt(n_features))
        self.seed = seed
        self.bootstrap = bootstrap  # debug flag; disabling makes n_trees=1, mtry=d a plain CART

    def fit(self, X, y, n_classes: int | None = None, jobs: int = 1):
        X, y, k = check_X_y(X, y, n_classes)
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        n, d = X.shape
        mtry = self.mtry if self.mtry is not None else math.ceil(math.sqrt(d))
        mtry = min(mtry, d)

        def build(tree_index: int):
            rng = np.random.Generator(np.random.PCG64(self.seed + tree_index))
            if self.bootstrap:
                idx = rng.integers(0, n, size=n)
            else:
                idx = np.arange(n)
            sampler = None
            if mtry < d:
                sampler = lambda: np.sort(rng.choice(d, size=mtry, replace=False))
            tree = grow_tree(X[idx], y[idx], k, self.max_depth, self.min_leaf, feature_sampler=sampler)
            return tree, idx

        results = parallel_map(build, range(self.n_trees), jobs=jobs)
        self.n_classes_ = k
        self.trees_ = [tree for tree, _ in results]

        # out-of-bag votes; rows never out of bag get no estimate
        self.oob_error_ = None
        if self.bootstrap:
            votes = np.zeros((n, k))
            for tree, idx in results:
                oob = np.setdiff1d(np.arange(n), idx, assume_unique=False)
                if oob.size:
                    pred = np.argmax(tree_apply(tree, X[oob], k), axis=1)
                    votes[oob, pred] += 1
            covered = votes.sum(axis=1) > 0
            if np.any(covered):
                oob_pred = np.argmax(votes[covered], axis=1)
                self.oob_error_ = float(np.mean(oob_pred != y[covered]))
        return self

    def predict_scores(self, X) -> np.ndarray:
        """Fraction of trees voting for each class; argmax is the majority vote."""
        self._check_is_fitted()
        X = check_array(X)
        votes = np.zeros((X.shape[0], self.n_classes_))
        for tree in self.trees_:
            pred = np.argmax(tree_apply(tree, X, self.n_classes_), axis=1)
            votes[np.arange(X.shape[0]), pred] += 1
        return votes / len(self.trees_)
