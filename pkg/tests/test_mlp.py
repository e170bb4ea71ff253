import numpy as np
import pytest

from session_miner.classifiers import MLPClassifier
from session_miner.classifiers.mlp import mlp_loss_grad
from session_miner.exceptions import NonFiniteLoss

XOR_X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], dtype=float)
XOR_Y = np.array([0, 1, 1, 0])


def test_xor_is_learnable():
    mlp = MLPClassifier(hidden=4, lr=0.5, epochs=2000, l2=0.0, seed=0).fit(XOR_X, XOR_Y)
    assert np.mean(mlp.predict(XOR_X) == XOR_Y) == 1.0


def test_untrained_network_is_exactly_uniform():
    mlp = MLPClassifier(hidden=4, epochs=0, seed=0).fit(XOR_X, XOR_Y)
    probs = mlp.predict_proba(XOR_X)
    assert np.abs(probs - 0.5).max() < 1e-2
    # output layer starts at zero, so it is exactly uniform and input-independent
    assert probs == pytest.approx(np.full((4, 2), 0.5))


def test_same_seed_identical_model():
    rng = np.random.Generator(np.random.PCG64(2))
    X = rng.normal(size=(30, 3))
    y = rng.integers(0, 3, size=30)
    a = MLPClassifier(hidden=6, epochs=50, seed=11).fit(X, y)
    b = MLPClassifier(hidden=6, epochs=50, seed=11).fit(X, y)
    for pa, pb in zip(a.params_, b.params_):
        assert np.array_equal(pa, pb)


def test_gradient_matches_finite_differences():
    rng = np.random.Generator(np.random.PCG64(11))
    worst = 0.0
    for _ in range(50):
        n, d, h, k = 5, 3, 4, 3
        X = rng.normal(size=(n, d))
        Y = np.eye(k)[rng.integers(0, k, n)]
        params = [
            rng.normal(size=(d, h)) * 0.5,
            rng.normal(size=h) * 0.5,
            rng.normal(size=(h, k)) * 0.5,
            rng.normal(size=k) * 0.5,
        ]
        l2 = float(rng.uniform(0, 0.3))
        _, grads = mlp_loss_grad(params, X, Y, l2)
        eps = 1e-5
        for pi, p in enumerate(params):
            it = np.nditer(p, flags=["multi_index"])
            for _ in it:
                idx = it.multi_index
                orig = p[idx]
                p[idx] = orig + eps
                up, _ = mlp_loss_grad(params, X, Y, l2)
                p[idx] = orig - eps
                down, _ = mlp_loss_grad(params, X, Y, l2)
                p[idx] = orig
                numeric = (up - down) / (2 * eps)
                analytic = grads[pi][idx]
                rel = abs(numeric - analytic) / max(1e-8, abs(numeric) + abs(analytic))
                worst = max(worst, rel)
    assert worst < 1e-4


def test_probabilities_form_a_simplex():
    rng = np.random.Generator(np.random.PCG64(13))
    X = rng.normal(size=(40, 4))
    y = rng.integers(0, 3, size=40)
    mlp = MLPClassifier(hidden=5, epochs=100, seed=1).fit(X, y)
    probs = mlp.predict_proba(rng.normal(size=(60, 4)))
    assert np.all(probs >= 0)
    assert np.abs(probs.sum(axis=1) - 1.0).max() < 1e-9


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_divergence_raises():
    with pytest.raises(NonFiniteLoss):
        MLPClassifier(hidden=4, lr=1e16, epochs=500, l2=1e12, seed=0).fit(XOR_X, XOR_Y)
