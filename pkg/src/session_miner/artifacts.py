"""Trained-model artifacts: catalog binding plus a versioned JSON wire format.

The document is canonical (sorted keys, no whitespace, repr floats), so the
same trained model always serializes to identical bytes and every float
round-trips exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .catalogs import get_catalog
from .classifiers import FAMILIES, make_estimator
from .classifiers.tree import TreeNode
from .exceptions import CatalogMismatch, SessionMinerError
from .features import FeatureVector

MODEL_FORMAT = "session-miner-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class ClassScores:
    """Per-class scores; the prediction is the argmax, ties to the lowest index."""

    scores: tuple[float, ...]

    @property
    def predicted(self) -> int:
        return int(np.argmax(self.scores))


@dataclass
class ModelArtifact:
    family: str
    estimator: object
    catalog: str
    class_names: tuple[str, ...]
    seed: int | None = None

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def hyperparameters(self) -> dict:
        return self.estimator.get_params()

    def _check_catalog(self, catalog: str):
        if catalog != self.catalog:
            raise CatalogMismatch(
                f"model expects catalog {self.catalog!r}, got {catalog!r}"
            )

    def predict_vector(self, vector: FeatureVector) -> ClassScores:
        self._check_catalog(vector.catalog)
        scores = self.estimator.predict_scores(np.asarray([vector.values]))[0]
        return ClassScores(tuple(float(s) for s in scores))

    def predict_matrix(self, X, catalog: str) -> tuple[np.ndarray, np.ndarray]:
        """(scores, predicted classes) for a feature matrix of the bound catalog."""
        self._check_catalog(catalog)
        scores = self.estimator.predict_scores(X)
        return scores, np.argmax(scores, axis=1)


# ---- parameter encoding per family -------------------------------------------


def _arr(a) -> list:
    return np.asarray(a, dtype=float).tolist()


def _encode_tree(node: TreeNode):
    if node.is_leaf:
        return {"counts": [int(c) for c in node.counts]}
    return {
        "feature": node.feature,
        "threshold": float(node.threshold),
        "left": _encode_tree(node.left),
        "right": _encode_tree(node.right),
    }


def _decode_tree(obj) -> TreeNode:
    if "counts" in obj:
        return TreeNode(counts=np.asarray(obj["counts"], dtype=float))
    return TreeNode(
        feature=int(obj["feature"]),
        threshold=float(obj["threshold"]),
        left=_decode_tree(obj["left"]),
        right=_decode_tree(obj["right"]),
    )


def _encode_params(family: str, est) -> dict:
    if family == "dt":
        return {"tree": _encode_tree(est.root_)}
    if family == "rf":
        return {"trees": [_encode_tree(t) for t in est.trees_]}
    if family == "lr":
        return {"mean": _arr(est.mean_), "scale": _arr(est.scale_), "W": _arr(est.W_), "b": _arr(est.b_)}
    if family == "svm":
        return {"mean": _arr(est.mean_), "scale": _arr(est.scale_), "W": _arr(est.W_), "b": _arr(est.b_)}
    if family == "nb":
        return {"priors": _arr(est.priors_), "means": _arr(est.means_), "vars": _arr(est.vars_)}
    if family == "mlp":
        W1, b1, W2, b2 = est.params_
        return {
            "mean": _arr(est.mean_), "scale": _arr(est.scale_),
            "W1": _arr(W1), "b1": _arr(b1), "W2": _arr(W2), "b2": _arr(b2),
        }
    raise ValueError(f"unknown model family {family!r}")


def _decode_params(family: str, est, params: dict, n_classes: int):
    est.n_classes_ = n_classes
    if family == "dt":
        est.root_ = _decode_tree(params["tree"])
    elif family == "rf":
        est.trees_ = [_decode_tree(t) for t in params["trees"]]
        est.oob_error_ = None
    elif family in ("lr", "svm"):
        est.mean_ = np.asarray(params["mean"])
        est.scale_ = np.asarray(params["scale"])
        est.W_ = np.asarray(params["W"])
        est.b_ = np.asarray(params["b"])
    elif family == "nb":
        est.priors_ = np.asarray(params["priors"])
        est.means_ = np.asarray(params["means"])
        est.vars_ = np.asarray(params["vars"])
    elif family == "mlp":
        est.mean_ = np.asarray(params["mean"])
        est.scale_ = np.asarray(params["scale"])
        est.params_ = tuple(np.asarray(params[k]) for k in ("W1", "b1", "W2", "b2"))
    else:
        raise ValueError(f"unknown model family {family!r}")
    return est


def artifact_to_json(artifact: ModelArtifact) -> str:
    doc = {
        "fmt": MODEL_FORMAT,
        "v": MODEL_VERSION,
        "family": artifact.family,
        "catalog": artifact.catalog,
        "class_names": list(artifact.class_names),
        "seed": artifact.seed,
        "hyperparameters": artifact.hyperparameters(),
        "params": _encode_params(artifact.family, artifact.estimator),
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def artifact_from_json(text: str) -> ModelArtifact:
    try:
        doc = json.loads(text)
    except ValueError as exc:
        raise SessionMinerError(f"model file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("fmt") != MODEL_FORMAT or doc.get("v") != MODEL_VERSION:
        raise SessionMinerError(f"not a {MODEL_FORMAT} v{MODEL_VERSION} document")
    family = doc["family"]
    if family not in FAMILIES:
        raise SessionMinerError(f"unknown model family {family!r}")
    get_catalog(doc["catalog"])  # raises on unknown catalog
    est = make_estimator(family, doc["hyperparameters"])
    class_names = tuple(doc["class_names"])
    _decode_params(family, est, doc["params"], len(class_names))
    return ModelArtifact(family, est, doc["catalog"], class_names, doc.get("seed"))


def save_model(artifact: ModelArtifact, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(artifact_to_json(artifact))


def load_model(path) -> ModelArtifact:
    with open(path, "r", encoding="utf-8") as fh:
        return artifact_from_json(fh.read())
