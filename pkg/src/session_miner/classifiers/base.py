"""Shared classifier machinery: input validation, standardization, predict-from-scores."""
from __future__ import annotations

import numpy as np

from ..base import ParamsMixin
from ..exceptions import EmptyTrainingSet


def check_array(X) -> np.ndarray:
    """Coerce to a finite 2-D float array."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")
    return X


def check_X_y(X, y, n_classes: int | None = None) -> tuple[np.ndarray, np.ndarray, int]:
    """Validate a training set; infer the class count when not given."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2:
        raise ValueError("X must be a 2-D array")
    if X.shape[0] == 0:
        raise EmptyTrainingSet("training set is empty")
    if y.shape != (X.shape[0],):
        raise ValueError("y must be one label per row of X")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite values")
    if y.min() < 0:
        raise ValueError("labels must be non-negative class indices")
    if n_classes is None:
        n_classes = int(y.max()) + 1
    elif y.max() >= n_classes:
        raise ValueError(f"label {int(y.max())} out of range for {n_classes} classes")
    return X, y, int(n_classes)


def fit_standardizer(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-feature mean and scale; constant features get scale 1 so they map to 0."""
    mean = X.mean(axis=0)
    scale = X.std(axis=0)
    scale[scale == 0.0] = 1.0
    return mean, scale


class BaseClassifier(ParamsMixin):
    """fit/predict skeleton; subclasses implement fit and predict_scores.

    predict() is argmax over predict_scores with ties going to the lowest
    class index (numpy argmax takes the first maximum).
    """

    n_classes_: int

    def predict_scores(self, X) -> np.ndarray:  # (n, k)
        raise NotImplementedError

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_scores(X), axis=1)

    def _check_is_fitted(self):
        if not hasattr(self, "n_classes_"):
            raise ValueError(f"{type(self).__name__} is not fitted")
