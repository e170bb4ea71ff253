"""Linear models: multinomial logistic regression and a one-vs-rest linear SVM.

Both standardize features internally (means/scales live in the fitted model)
so the predict contract is uniform across families.
"""
from __future__ import annotations

import numpy as np

from ..exceptions import NonFiniteLoss
from .base import BaseClassifier, check_array, check_X_y, fit_standardizer


def softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def softmax_loss_grad(W, b, X, y_onehot, l2):
    """Mean cross-entropy + (l2/2)||W||^2 (bias unpenalized), with gradients."""
    n = X.shape[0]
    P = softmax(X @ W + b)
    eps = np.finfo(float).tiny
    loss = -np.mean(np.log(np.sum(P * y_onehot, axis=1) + eps)) + 0.5 * l2 * np.sum(W * W)
    err = (P - y_onehot) / n
    grad_W = X.T @ err + l2 * W
    grad_b = err.sum(axis=0)
    return float(loss), grad_W, grad_b


class LogisticRegression(BaseClassifier):
    """Multinomial softmax regression, full-batch gradient descent from zero init.

    Stops when every gradient component is below tol or after max_iter steps.
    """

    def __init__(self, l2: float = 1e-3, lr: float = 0.5, max_iter: int = 500, tol: float = 1e-6):
        self.l2 = l2
        self.lr = lr
        self.max_iter = max_iter
        self.tol = tol

    def fit(self, X, y, n_classes: int | None = None):
        X, y, k = check_X_y(X, y, n_classes)
        self.mean_, self.scale_ = fit_standardizer(X)
        Xs = (X - self.mean_) / self.scale_
        Y = np.eye(k)[y]
        W = np.zeros((X.shape[1], k))
        b = np.zeros(k)
        for _ in range(self.max_iter):
            loss, gW, gb = softmax_loss_grad(W, b, Xs, Y, self.l2)
            if not np.isfinite(loss):
                raise NonFiniteLoss("logistic regression diverged; lower the learning rate")
            if max(np.abs(gW).max(initial=0.0), np.abs(gb).max(initial=0.0)) < self.tol:
                break
            W -= self.lr * gW
            b -= self.lr * gb
        self.n_classes_ = k
        self.W_, self.b_ = W, b
        return self

    def predict_scores(self, X) -> np.ndarray:
        return self.predict_proba(X)

    def predict_proba(self, X) -> np.ndarray:
        self._check_is_fitted()
        Xs = (check_array(X) - self.mean_) / self.scale_
        return softmax(Xs @ self.W_ + self.b_)


class LinearSVM(BaseClassifier):
    """One-vs-rest linear SVM trained by seeded-shuffle subgradient descent.

    Per-class objective: 1/(2C) ||w||^2 + mean hinge, optimized with the
     1/t step schedule (step C/t); biases are unregularized. C=0 degenerates
    to the zero model, which predicts the lowest class index everywhere.
    """

    def __init__(self, C: float = 1.0, epochs: int = 50, seed: int = 0):
        self.C = C
        self.epochs = epochs
        self.seed = seed

    def fit(self, X, y, n_classes: int | None = None):
        X, y, k = check_X_y(X, y, n_classes)
        if self.C < 0:
            raise ValueError("C must be >= 0")
        self.mean_, self.scale_ = fit_standardizer(X)
        Xs = (X - self.mean_) / self.scale_
        n, d = Xs.shape
        Y = np.where(np.eye(k)[y] > 0, 1.0, -1.0)  # (n, k) in {-1, +1}
        W = np.zeros((k, d))
        b = np.zeros(k)
        rng = np.random.Generator(np.random.PCG64(self.seed))
        # tail-averaged iterates: the second half of the run is averaged, which
        # stabilizes the 1/t schedule considerably
        W_sum = np.zeros_like(W)
        b_sum = np.zeros_like(b)
        averaged = 0
        tail_start = (self.epochs * n) // 2
        t = 0
        for _ in range(self.epochs):
            for i in rng.permutation(n):
                t += 1
                x = Xs[i]
                yi = Y[i]
                margins = yi * (W @ x + b)
                violated = margins < 1.0
                W *= 1.0 - 1.0 / t
                if np.any(violated):
                    step = self.C / t
                    W[violated] += step * yi[violated, None] * x
                    b[violated] += step * yi[violated]
                if t > tail_start:
                    W_sum += W
                    b_sum += b
                    averaged += 1
        self.n_classes_ = k
        if averaged:
            self.W_, self.b_ = W_sum / averaged, b_sum / averaged
        else:
            self.W_, self.b_ = W, b
        return self

    def predict_scores(self, X) -> np.ndarray:
        """Per-class margins; argmax (first max on ties) is the decision."""
        self._check_is_fitted()
        Xs = (check_array(X) - self.mean_) / self.scale_
        return Xs @ self.W_.T + self.b_
