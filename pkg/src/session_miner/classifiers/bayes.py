"""Gaussian naive Bayes with a variance floor for degenerate features."""
from __future__ import annotations

import numpy as np

from .base import BaseClassifier, check_array, check_X_y

VAR_FLOOR = 1e-9


class GaussianNaiveBayes(BaseClassifier):
    def fit(self, X, y, n_classes: int | None = None):
        X, y, k = check_X_y(X, y, n_classes)
        n, d = X.shape
        self.priors_ = np.bincount(y, minlength=k) / n
        self.means_ = np.zeros((k, d))
        self.vars_ = np.ones((k, d))
        for c in range(k):
            rows = X[y == c]
            if rows.shape[0]:
                self.means_[c] = rows.mean(axis=0)
                self.vars_[c] = np.maximum(rows.var(axis=0), VAR_FLOOR)
        self.n_classes_ = k
        return self

    def predict_scores(self, X) -> np.ndarray:
        return self.predict_proba(X)

    def predict_proba(self, X) -> np.ndarray:
        self._check_is_fitted()
        X = check_array(X)
        with np.errstate(divide="ignore"):
            log_prior = np.log(self.priors_)  # -inf for absent classes
        joint = np.empty((X.shape[0], self.n_classes_))
        for c in range(self.n_classes_):
            diff = X - self.means_[c]
            log_lik = -0.5 * (np.log(2.0 * np.pi * self.vars_[c]) + diff * diff / self.vars_[c])
            joint[:, c] = log_prior[c] + log_lik.sum(axis=1)
        # normalize in log space, then renormalize to kill float drift
        joint -= joint.max(axis=1, keepdims=True)
        p = np.exp(joint)
        p /= p.sum(axis=1, keepdims=True)
        return p
