"""session-miner: search-session intent detection and knowledge-gain prediction toolkit."""

__version__ = "0.1.0"

from .artifacts import ClassScores, ModelArtifact, load_model, save_model
from .catalogs import CATALOGS, INTENT_V1, KNOWLEDGE_V1, FeatureCatalog, get_catalog
from .classifiers import (
    DecisionTreeClassifier,
    GaussianNaiveBayes,
    LinearSVM,
    LogisticRegression,
    MLPClassifier,
    RandomForestClassifier,
    make_estimator,
)
from .events import Event, EventKind, IntentClass, Session, validate_session
from .exceptions import SessionMinerError
from .features import (
    FeatureTable,
    FeatureVector,
    SessionFeaturizer,
    extract_intent_vector,
    extract_knowledge_vector,
    extract_table,
    jaccard,
)
from .knowledge import KnowledgeLevel, KnowledgeRecord, assign_classes, score_test, select_features
from .log_io import Corpus, build_corpus, parse_event_log, read_event_log
from .metrics import EvalReport, evaluate, report_table
from .model_selection import GridSearchResult, default_grid, grid_search, stratified_kfold
from .ranking import FeatureRanking, information_gain_ranking
from .segmentation import GapPolicy, segment_by_gap
from .synth import BehaviorProfile, SynthConfig, default_profiles, generate_corpus

__all__ = [
    "BehaviorProfile",
    "CATALOGS",
    "ClassScores",
    "Corpus",
    "DecisionTreeClassifier",
    "EvalReport",
    "Event",
    "EventKind",
    "FeatureCatalog",
    "FeatureRanking",
    "FeatureTable",
    "FeatureVector",
    "GapPolicy",
    "GaussianNaiveBayes",
    "GridSearchResult",
    "INTENT_V1",
    "IntentClass",
    "KNOWLEDGE_V1",
    "KnowledgeLevel",
    "KnowledgeRecord",
    "LinearSVM",
    "LogisticRegression",
    "MLPClassifier",
    "ModelArtifact",
    "RandomForestClassifier",
    "Session",
    "SessionFeaturizer",
    "SessionMinerError",
    "SynthConfig",
    "assign_classes",
    "build_corpus",
    "default_grid",
    "default_profiles",
    "evaluate",
    "extract_intent_vector",
    "extract_knowledge_vector",
    "extract_table",
    "generate_corpus",
    "get_catalog",
    "grid_search",
    "information_gain_ranking",
    "jaccard",
    "load_model",
    "make_estimator",
    "parse_event_log",
    "read_event_log",
    "report_table",
    "save_model",
    "score_test",
    "segment_by_gap",
    "select_features",
    "stratified_kfold",
    "validate_session",
]
