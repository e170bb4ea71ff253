"""Six from-scratch classifier families behind one fit/predict/get_params contract."""
from .base import BaseClassifier, check_array, check_X_y
from .bayes import GaussianNaiveBayes
from .forest import RandomForestClassifier
from .linear import LinearSVM, LogisticRegression
from .mlp import MLPClassifier
from .tree import DecisionTreeClassifier, gini

FAMILIES = {
    "dt": DecisionTreeClassifier,
    "rf": RandomForestClassifier,
    "lr": LogisticRegression,
    "svm": LinearSVM,
    "nb": GaussianNaiveBayes,
    "mlp": MLPClassifier,
}

SEEDED_FAMILIES = frozenset({"rf", "svm", "mlp"})


def make_estimator(family: str, params: dict | None = None, seed: int | None = None):
    """Instantiate a family by name, wiring the seed into stochastic families."""
    if family not in FAMILIES:
        raise ValueError(f"unknown model family {family!r} (choose from {sorted(FAMILIES)})")
    kwargs = dict(params or {})
    if family in SEEDED_FAMILIES and seed is not None and "seed" not in kwargs:
        kwargs["seed"] = seed
    return FAMILIES[family](**kwargs)


__all__ = [
    "BaseClassifier",
    "DecisionTreeClassifier",
    "FAMILIES",
    "GaussianNaiveBayes",
    "LinearSVM",
    "LogisticRegression",
    "MLPClassifier",
    "RandomForestClassifier",
    "SEEDED_FAMILIES",
    "check_array",
    "check_X_y",
    "gini",
    "make_estimator",
]
