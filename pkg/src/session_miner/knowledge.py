"""Knowledge state and gain: test scoring, 3-class discretization, feature selection.

State classes come from post-test scores, gain classes from post minus pre.
The tertile policy (default) cuts at the empirical 1/3 and 2/3 quantiles;
boundary values always fall to the lower class. The fixed-cut defaults are
artifact choices, not published thresholds.
"""
from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, replace
from enum import IntEnum
from typing import IO, Sequence

import numpy as np

from .catalogs import FeatureCatalog
from .exceptions import (
    DegenerateDistributionWarning,
    EmptyTest,
    HeaderError,
    LengthMismatch,
    SessionMinerError,
    UnknownLabel,
    UnreadableStream,
)
from .model_selection import cross_validate
from .ranking import information_gain_ranking

KNOWLEDGE_HEADER = "#session-miner-knowledge v1"

logger = logging.getLogger(__name__)


class KnowledgeLevel(IntEnum):
    LOW = 0
    MODERATE = 1
    HIGH = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "KnowledgeLevel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise UnknownLabel(f"unknown knowledge level {name!r}") from None


KNOWLEDGE_CLASS_NAMES: tuple[str, ...] = tuple(c.label for c in KnowledgeLevel)


@dataclass(frozen=True)
class KnowledgeRecord:
    session_id: str
    pre_score: float
    post_score: float
    state_class: KnowledgeLevel | None = None
    gain_class: KnowledgeLevel | None = None

    def __post_init__(self):
        if not (0.0 <= self.pre_score <= 1.0 and 0.0 <= self.post_score <= 1.0):
            raise ValueError("test scores must lie in [0, 1]")

    @property
    def gain(self) -> float:
        return self.post_score - self.pre_score


@dataclass(frozen=True)
class ClassThresholds:
    t1: float
    t2: float

    def __post_init__(self):
        if not self.t1 < self.t2:
            raise ValueError("thresholds must satisfy t1 < t2")


DEFAULT_STATE_CUTS = ClassThresholds(0.4, 0.7)
DEFAULT_GAIN_CUTS = ClassThresholds(0.05, 0.25)


def score_test(responses: Sequence, key: Sequence) -> float:
    """Fraction of answers matching the key."""
    if len(key) == 0:
        raise EmptyTest("a test needs at least one question")
    if len(responses) != len(key):
        raise LengthMismatch("responses and key differ in length")
    correct = sum(1 for r, k in zip(responses, key) if r == k)
    return correct / len(key)


def classify_value(value: float, cuts: ClassThresholds) -> KnowledgeLevel:
    if value <= cuts.t1:
        return KnowledgeLevel.LOW
    if value <= cuts.t2:
        return KnowledgeLevel.MODERATE
    return KnowledgeLevel.HIGH


def tertile_cuts(values: Sequence[float]) -> ClassThresholds | None:
    """Cuts at the empirical 1/3 and 2/3 quantiles; None when they collapse."""
    t1, t2 = np.quantile(np.asarray(values, dtype=float), [1.0 / 3.0, 2.0 / 3.0])
    if not t1 < t2:
        return None
    return ClassThresholds(float(t1), float(t2))


def assign_classes(
    records: Sequence[KnowledgeRecord],
    policy: str = "tertile",
    state_cuts: ClassThresholds | None = None,
    gain_cuts: ClassThresholds | None = None,
) -> list[KnowledgeRecord]:
    """Attach state_class and gain_class to every record.

    tertile: data-driven cuts over this record set (>= 3 records); falls back
    to the fixed defaults with a DegenerateDistributionWarning when a cut
    collapses. fixed: the supplied (or default) cut points.
    """
    if policy not in ("tertile", "fixed"):
        raise ValueError(f"unknown threshold policy {policy!r}")
    if policy == "tertile":
        if len(records) < 3:
            raise SessionMinerError("tertile policy needs at least 3 records")
        state = tertile_cuts([r.post_score for r in records])
        gain = tertile_cuts([r.gain for r in records])
        if state is None:
            warnings.warn(
                "post-score tertiles collapsed; using fixed state cuts",
                DegenerateDistributionWarning,
                stacklevel=2,
            )
            state = DEFAULT_STATE_CUTS
        if gain is None:
            warnings.warn(
                "gain tertiles collapsed; using fixed gain cuts",
                DegenerateDistributionWarning,
                stacklevel=2,
            )
            gain = DEFAULT_GAIN_CUTS
    else:
        state = state_cuts or DEFAULT_STATE_CUTS
        gain = gain_cuts or DEFAULT_GAIN_CUTS
    return [
        replace(
            r,
            state_class=classify_value(r.post_score, state),
            gain_class=classify_value(r.gain, gain),
        )
        for r in records
    ]


# ---- knowledge TSV -----------------------------------------------------------


def knowledge_text(records: Sequence[KnowledgeRecord]) -> str:
    lines = [KNOWLEDGE_HEADER]
    for r in records:
        lines.append(f"{r.session_id}\t{r.pre_score:.4f}\t{r.post_score:.4f}")
    return "\n".join(lines) + "\n"


def load_knowledge(stream: IO[bytes]) -> list[KnowledgeRecord]:
    try:
        data = stream.read()
    except OSError as exc:
        raise UnreadableStream(f"cannot read knowledge file: {exc}") from exc
    lines = data.decode("utf-8").split("\n")
    if not lines or lines[0].strip() != KNOWLEDGE_HEADER:
        raise HeaderError(f"knowledge file must start with {KNOWLEDGE_HEADER!r}")
    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise SessionMinerError(f"knowledge line {line_no}: expected session_id<TAB>pre<TAB>post")
        try:
            records.append(KnowledgeRecord(parts[0], float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise SessionMinerError(f"knowledge line {line_no}: {exc}") from exc
    return records


def read_knowledge(path) -> list[KnowledgeRecord]:
    try:
        with open(path, "rb") as fh:
            return load_knowledge(fh)
    except OSError as exc:
        raise UnreadableStream(f"cannot open {path}: {exc}") from exc


# ---- feature selection ---------------------------------------------------------


def select_features(
    X,
    y,
    catalog: FeatureCatalog,
    method: str = "ig-top-k",
    budget: int = 10,
    family: str = "dt",
    seed: int = 0,
    k_folds: int = 3,
    family_params: dict | None = None,
    jobs: int = 1,
) -> tuple[str, ...]:
    """Pick a feature subset by name.

    ig-top-k: the top-budget features of the information-gain ranking.
    greedy-forward: grow the subset one feature at a time by best CV accuracy
    of the given family; stop at the budget or when nothing improves. Ties go
    to catalog order, so the procedure is deterministic given the seed.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if budget < 1 or budget > catalog.size:
        raise ValueError("budget must be in [1, catalog size]")
    if method == "ig-top-k":
        ranking = information_gain_ranking(X, y, catalog)
        return ranking.names()[:budget]
    if method != "greedy-forward":
        raise ValueError(f"unknown selection method {method!r}")

    n_classes = int(y.max()) + 1
    chosen: list[int] = []
    best_score = -1.0
    names = catalog.names()
    for _ in range(budget):
        best_candidate = None
        for i in range(catalog.size):
            if i in chosen:
                continue
            cols = chosen + [i]
            acc, _ = cross_validate(
                family, family_params or {}, X[:, cols], y, n_classes, k_folds, seed, jobs
            )
            score = float(np.mean(acc))
            if best_candidate is None or score > best_candidate[0]:
                best_candidate = (score, i)
        if best_candidate is None or best_candidate[0] <= best_score:
            break
        best_score = best_candidate[0]
        chosen.append(best_candidate[1])
        logger.debug("greedy-forward added %s (cv accuracy %.3f)", names[best_candidate[1]], best_score)
    return tuple(names[i] for i in chosen)
