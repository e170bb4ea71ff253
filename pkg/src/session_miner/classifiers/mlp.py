"""One-hidden-layer perceptron: tanh hidden units, softmax output, full-batch descent."""
from __future__ import annotations

import numpy as np

from ..exceptions import NonFiniteLoss
from .base import BaseClassifier, check_array, check_X_y, fit_standardizer
from .linear import softmax

INIT_SCALE = 0.1


def mlp_forward(params, X):
    W1, b1, W2, b2 = params
    Z = np.tanh(X @ W1 + b1)
    return Z, softmax(Z @ W2 + b2)


def mlp_loss_grad(params, X, y_onehot, l2):
    """Mean cross-entropy + (l2/2)(||W1||^2 + ||W2||^2); biases unpenalized."""
    W1, b1, W2, b2 = params
    n = X.shape[0]
    Z, P = mlp_forward(params, X)
    eps = np.finfo(float).tiny
    loss = -np.mean(np.log(np.sum(P * y_onehot, axis=1) + eps))
    loss += 0.5 * l2 * (np.sum(W1 * W1) + np.sum(W2 * W2))
    d2 = (P - y_onehot) / n
    gW2 = Z.T @ d2 + l2 * W2
    gb2 = d2.sum(axis=0)
    dZ = (d2 @ W2.T) * (1.0 - Z * Z)
    gW1 = X.T @ dZ + l2 * W1
    gb1 = dZ.sum(axis=0)
    return float(loss), (gW1, gb1, gW2, gb2)


class MLPClassifier(BaseClassifier):
    """Hidden layer seeded uniform(-0.1, 0.1); output layer starts at zero,
    so the untrained network emits exactly uniform class probabilities."""

    def __init__(self, hidden: int = 16, lr: float = 0.3, epochs: int = 300, l2: float = 1e-4, seed: int = 0):
        self.hidden = hidden
        self.lr = lr
        self.epochs = epochs
        self.l2 = l2
        self.seed = seed

    def fit(self, X, y, n_classes: int | None = None):
        X, y, k = check_X_y(X, y, n_classes)
        if self.hidden < 1:
            raise ValueError("hidden must be >= 1")
        self.mean_, self.scale_ = fit_standardizer(X)
        Xs = (X - self.mean_) / self.scale_
        Y = np.eye(k)[y]
        d = X.shape[1]
        rng = np.random.Generator(np.random.PCG64(self.seed))
        W1 = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(d, self.hidden))
        b1 = rng.uniform(-INIT_SCALE, INIT_SCALE, size=self.hidden)
        W2 = np.zeros((self.hidden, k))
        b2 = np.zeros(k)
        params = [W1, b1, W2, b2]
        for _ in range(self.epochs):
            loss, grads = mlp_loss_grad(params, Xs, Y, self.l2)
            if not np.isfinite(loss):
                raise NonFiniteLoss("mlp training diverged; lower the learning rate")
            for p, g in zip(params, grads):
                p -= self.lr * g
        self.n_classes_ = k
        self.params_ = tuple(params)
        return self

    def predict_scores(self, X) -> np.ndarray:
        return self.predict_proba(X)

    def predict_proba(self, X) -> np.ndarray:
        self._check_is_fitted()
        Xs = (check_array(X) - self.mean_) / self.scale_
        return mlp_forward(self.params_, Xs)[1]
