import numpy as np
import pytest

from session_miner.classifiers import DecisionTreeClassifier, RandomForestClassifier
from session_miner.classifiers.tree import TreeNode
from session_miner.exceptions import EmptyTrainingSet


def test_single_tree_no_bootstrap_equals_plain_cart():
    rng = np.random.Generator(np.random.PCG64(100))
    for _ in range(30):
        n, d = int(rng.integers(5, 40)), int(rng.integers(2, 6))
        X = rng.normal(size=(n, d))
        y = rng.integers(0, 3, size=n)
        Xt = rng.normal(size=(15, d))
        dt = DecisionTreeClassifier(max_depth=4).fit(X, y, n_classes=3)
        rf = RandomForestClassifier(n_trees=1, mtry=d, bootstrap=False, max_depth=4).fit(X, y, n_classes=3)
        assert np.array_equal(dt.predict(Xt), rf.predict(Xt))


def test_same_seed_same_forest():
    rng = np.random.Generator(np.random.PCG64(7))
    X = rng.normal(size=(40, 4))
    y = rng.integers(0, 2, size=40)
    a = RandomForestClassifier(n_trees=5, seed=9).fit(X, y)
    b = RandomForestClassifier(n_trees=5, seed=9).fit(X, y)
    Xt = rng.normal(size=(25, 4))
    assert np.array_equal(a.predict_scores(Xt), b.predict_scores(Xt))


def test_different_seed_differs_somewhere():
    rng = np.random.Generator(np.random.PCG64(7))
    X = rng.normal(size=(60, 4))
    y = rng.integers(0, 2, size=60)
    a = RandomForestClassifier(n_trees=5, seed=1).fit(X, y)
    b = RandomForestClassifier(n_trees=5, seed=2).fit(X, y)
    Xt = rng.normal(size=(100, 4))
    assert not np.array_equal(a.predict_scores(Xt), b.predict_scores(Xt))


def test_oob_error_small_on_separable_blobs():
    rng = np.random.Generator(np.random.PCG64(7))
    a = rng.normal(loc=(-2.0, -2.0), scale=0.5, size=(100, 2))
    b = rng.normal(loc=(2.0, 2.0), scale=0.5, size=(100, 2))
    X = np.vstack([a, b])
    y = np.array([0] * 100 + [1] * 100)
    rf = RandomForestClassifier(n_trees=25, seed=1).fit(X, y)
    assert rf.oob_error_ is not None
    assert rf.oob_error_ < 0.05


def test_majority_vote_with_stub_trees():
    # three hand-built stumps voting (A, A, B) -> A
    def stump(cls):
        counts = np.zeros(2)
        counts[cls] = 1
        return TreeNode(counts=counts)

    rf = RandomForestClassifier(n_trees=3)
    rf.n_classes_ = 2
    rf.trees_ = [stump(0), stump(0), stump(1)]
    scores = rf.predict_scores([[0.0]])
    assert scores[0] == pytest.approx([2 / 3, 1 / 3])
    assert rf.predict([[0.0]])[0] == 0


def test_vote_tie_goes_to_lowest_class():
    def stump(cls):
        counts = np.zeros(3)
        counts[cls] = 1
        return TreeNode(counts=counts)

    rf = RandomForestClassifier(n_trees=2)
    rf.n_classes_ = 3
    rf.trees_ = [stump(2), stump(1)]
    assert rf.predict([[0.0]])[0] == 1


def test_scale_invariance_same_seed():
    rng = np.random.Generator(np.random.PCG64(12))
    X = rng.normal(size=(50, 4))
    y = rng.integers(0, 3, size=50)
    Xt = rng.normal(size=(30, 4))
    base = RandomForestClassifier(n_trees=7, seed=3).fit(X, y, n_classes=3).predict(Xt)
    Xs, Xts = X.copy(), Xt.copy()
    Xs[:, 2] *= 1000.0
    Xts[:, 2] *= 1000.0
    scaled = RandomForestClassifier(n_trees=7, seed=3).fit(Xs, y, n_classes=3).predict(Xts)
    assert np.array_equal(base, scaled)


def test_jobs_do_not_change_the_model():
    rng = np.random.Generator(np.random.PCG64(21))
    X = rng.normal(size=(60, 5))
    y = rng.integers(0, 3, size=60)
    Xt = rng.normal(size=(40, 5))
    serial = RandomForestClassifier(n_trees=8, seed=5).fit(X, y, n_classes=3, jobs=1)
    threaded = RandomForestClassifier(n_trees=8, seed=5).fit(X, y, n_classes=3, jobs=4)
    assert np.array_equal(serial.predict_scores(Xt), threaded.predict_scores(Xt))


def test_empty_training_set_rejected():
    with pytest.raises(EmptyTrainingSet):
        RandomForestClassifier().fit(np.empty((0, 2)), np.empty(0, dtype=int))
