import numpy as np
import pytest

from session_miner.classifiers import FAMILIES
from session_miner.exceptions import TooFewInstances
from session_miner.model_selection import (
    cross_validate,
    default_grid,
    grid_search,
    stratified_kfold,
)


def test_kfold_exact_divisibility():
    labels = [0, 0, 0, 1, 1, 1, 2, 2, 2]
    folds = stratified_kfold(labels, 3, seed=0)
    for f in range(3):
        chunk = [labels[i] for i in np.flatnonzero(folds == f)]
        assert sorted(chunk) == [0, 1, 2]


def test_kfold_deterministic():
    labels = np.array([0, 1, 0, 1, 2, 2, 0, 1, 2, 0])
    assert np.array_equal(stratified_kfold(labels, 3, seed=5), stratified_kfold(labels, 3, seed=5))


def test_kfold_ten_a_five_b_five_folds():
    labels = np.array([0] * 10 + [1] * 5)
    folds = stratified_kfold(labels, 5, seed=1)
    for f in range(5):
        chunk = labels[folds == f]
        assert np.sum(chunk == 0) == 2
        assert np.sum(chunk == 1) == 1


def test_kfold_proportions_off_by_at_most_one():
    rng = np.random.Generator(np.random.PCG64(3))
    for _ in range(20):
        labels = rng.integers(0, 3, size=int(rng.integers(12, 80)))
        k = int(rng.integers(2, 6))
        folds = stratified_kfold(labels, k, seed=int(rng.integers(0, 100)))
        for cls in range(3):
            per_fold = [int(np.sum(labels[folds == f] == cls)) for f in range(k)]
            assert max(per_fold) - min(per_fold) <= 1


def test_kfold_too_few_instances():
    with pytest.raises(TooFewInstances):
        stratified_kfold([0, 1], 3, seed=0)
    with pytest.raises(ValueError):
        stratified_kfold([0, 1, 2], 1, seed=0)


def _separable(n=30, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    X = np.vstack([rng.normal(-2, 0.3, size=(n, 2)), rng.normal(2, 0.3, size=(n, 2))])
    y = np.array([0] * n + [1] * n)
    return X, y


def test_singleton_grid_selects_itself():
    X, y = _separable()
    result = grid_search("dt", [{"max_depth": 2}], X, y, 2, k_folds=3, seed=0)
    assert result.selected_index == 0
    acc, wf1 = cross_validate("dt", {"max_depth": 2}, X, y, 2, k_folds=3, seed=0)
    assert result.selected.fold_accuracy == tuple(acc)
    assert result.selected.fold_weighted_f1 == tuple(wf1)


def test_duplicate_cells_tie_break_first():
    X, y = _separable()
    cell = {"max_depth": 2, "min_leaf": 1}
    result = grid_search("dt", [cell, dict(cell)], X, y, 2, k_folds=3, seed=0)
    assert result.selected_index == 0


def test_depth_grid_on_xor_selects_unlimited():
    rng = np.random.Generator(np.random.PCG64(9))
    # noisy xor layout: a depth-1 stump cannot beat ~0.75
    corners = np.array([[0, 0], [0, 1], [1, 0], [1, 1]], float)
    labels = np.array([0, 1, 1, 0])
    idx = rng.integers(0, 4, size=120)
    X = corners[idx] + rng.normal(0, 0.05, size=(120, 2))
    y = labels[idx]
    # oracle: enumerate every depth-1 stump threshold and bound its accuracy
    best_stump = 0.0
    for f in range(2):
        for t in np.unique(X[:, f]):
            for sides in ((0, 1), (1, 0)):
                pred = np.where(X[:, f] <= t, sides[0], sides[1])
                best_stump = max(best_stump, float(np.mean(pred == y)))
    assert best_stump <= 0.75
    result = grid_search("dt", [{"max_depth": 1}, {"max_depth": None}], X, y, 2, k_folds=4, seed=2)
    assert result.best_params == {"max_depth": None}


def test_grid_error_names_the_cell():
    from session_miner.exceptions import SessionMinerError

    with pytest.raises(SessionMinerError, match="max_depth"):
        grid_search("dt", [{"max_depth": 1}], np.empty((0, 2)), np.empty(0, dtype=int), 2)


def test_default_grids_exist_for_every_family():
    for family in FAMILIES:
        grid = default_grid(family)
        assert grid and all(isinstance(cell, dict) for cell in grid)


def test_selection_consistency_on_synthetic_separable_task():
    # the selected cell's CV accuracy is within 0.02 of the best cell, seeds 1..5
    X, y = _separable(n=40, seed=77)
    grid = default_grid("dt")
    for seed in range(1, 6):
        result = grid_search("dt", grid, X, y, 2, k_folds=3, seed=seed)
        best = max(cell.mean_accuracy for cell in result.cells)
        assert best - result.selected.mean_accuracy <= 0.02


def test_grid_result_json():
    import json

    X, y = _separable()
    result = grid_search("dt", [{"max_depth": 1}, {"max_depth": 2}], X, y, 2, k_folds=3, seed=0)
    doc = json.loads(result.to_json())
    assert doc["fmt"] == "session-miner-gridsearch"
    assert len(doc["cells"]) == 2
    assert doc["selected_index"] == result.selected_index
