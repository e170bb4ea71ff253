import numpy as np
import pytest

from session_miner.artifacts import (
    ClassScores,
    ModelArtifact,
    artifact_from_json,
    artifact_to_json,
    load_model,
    save_model,
)
from session_miner.classifiers import FAMILIES, make_estimator
from session_miner.events import INTENT_CLASS_NAMES
from session_miner.exceptions import CatalogMismatch, SessionMinerError
from session_miner.features import FeatureVector
from session_miner.synth import SynthConfig, generate_corpus
from session_miner.features import extract_table


def _training_table():
    corpus = generate_corpus(SynthConfig(n_sessions=60, seed=9))
    return extract_table(corpus.sessions, "intent-v1")


@pytest.fixture(scope="module")
def table():
    return _training_table()


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_round_trip_preserves_predictions(family, table):
    y = table.y(INTENT_CLASS_NAMES)
    params = {"n_trees": 5} if family == "rf" else {"epochs": 10} if family in ("svm", "mlp") else {}
    est = make_estimator(family, params, seed=7)
    est.fit(table.X, y, n_classes=3)
    artifact = ModelArtifact(family, est, "intent-v1", INTENT_CLASS_NAMES, seed=7)
    restored = artifact_from_json(artifact_to_json(artifact))
    a = artifact.estimator.predict_scores(table.X)
    b = restored.estimator.predict_scores(table.X)
    assert np.array_equal(a, b)
    assert restored.class_names == INTENT_CLASS_NAMES
    assert restored.hyperparameters() == artifact.hyperparameters()


@pytest.mark.parametrize("family", sorted(FAMILIES))
def test_serialization_is_byte_stable(family, table):
    y = table.y(INTENT_CLASS_NAMES)
    def build():
        est = make_estimator(family, {"n_trees": 3} if family == "rf" else {}, seed=3)
        est.fit(table.X, y, n_classes=3)
        return artifact_to_json(ModelArtifact(family, est, "intent-v1", INTENT_CLASS_NAMES, 3))
    assert build() == build()


def test_save_load_file(tmp_path, table):
    y = table.y(INTENT_CLASS_NAMES)
    est = make_estimator("dt", {"max_depth": 3}).fit(table.X, y, n_classes=3)
    artifact = ModelArtifact("dt", est, "intent-v1", INTENT_CLASS_NAMES)
    path = tmp_path / "model.json"
    save_model(artifact, path)
    text = path.read_text()
    assert text.startswith('{"class_names"') or '"fmt":"session-miner-model"' in text
    restored = load_model(path)
    assert np.array_equal(restored.estimator.predict(table.X), est.predict(table.X))


def test_catalog_mismatch_rejected(table):
    y = table.y(INTENT_CLASS_NAMES)
    est = make_estimator("dt", {}).fit(table.X, y, n_classes=3)
    artifact = ModelArtifact("dt", est, "intent-v1", INTENT_CLASS_NAMES)
    with pytest.raises(CatalogMismatch):
        artifact.predict_vector(FeatureVector("knowledge-v1", tuple([0.0] * 79)))
    with pytest.raises(CatalogMismatch):
        artifact.predict_matrix(table.X, "knowledge-v1")


def test_predict_vector_returns_scores(table):
    y = table.y(INTENT_CLASS_NAMES)
    est = make_estimator("dt", {}).fit(table.X, y, n_classes=3)
    artifact = ModelArtifact("dt", est, "intent-v1", INTENT_CLASS_NAMES)
    fv = FeatureVector("intent-v1", tuple(table.X[0]))
    scores = artifact.predict_vector(fv)
    assert len(scores.scores) == 3
    assert scores.predicted == int(np.argmax(scores.scores))


def test_class_scores_tie_breaks_low():
    assert ClassScores((0.4, 0.4, 0.2)).predicted == 0


def test_bad_document_rejected():
    with pytest.raises(SessionMinerError):
        artifact_from_json("{}")
    with pytest.raises(SessionMinerError):
        artifact_from_json("not json")
