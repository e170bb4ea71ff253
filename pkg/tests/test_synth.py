import io
import json

import numpy as np
import pytest

from session_miner.catalogs import INTENT_V1
from session_miner.events import IntentClass, validate_session
from session_miner.exceptions import InvalidConfig
from session_miner.features import extract_table
from session_miner.knowledge import load_knowledge
from session_miner.log_io import LABELS_HEADER, LOG_HEADER, build_corpus, load_labels, parse_event_log
from session_miner.synth import (
    SynthConfig,
    config_from_json,
    default_knowledge_profiles,
    default_profiles,
    generate_corpus,
    largest_remainder_counts,
)


def test_zero_sessions_yields_header_only_files():
    corpus = generate_corpus(SynthConfig(n_sessions=0, seed=1))
    assert corpus.event_log == LOG_HEADER + "\n"
    assert corpus.labels == LABELS_HEADER + "\n"
    assert corpus.knowledge == "#session-miner-knowledge v1\n"


def test_same_config_and_seed_byte_identical():
    a = generate_corpus(SynthConfig(n_sessions=40, seed=11))
    b = generate_corpus(SynthConfig(n_sessions=40, seed=11))
    assert a.event_log == b.event_log
    assert a.labels == b.labels
    assert a.knowledge == b.knowledge


def test_jobs_do_not_change_output():
    a = generate_corpus(SynthConfig(n_sessions=30, seed=3), jobs=1)
    b = generate_corpus(SynthConfig(n_sessions=30, seed=3), jobs=4)
    assert a.event_log == b.event_log


def test_different_seeds_differ():
    a = generate_corpus(SynthConfig(n_sessions=20, seed=1))
    b = generate_corpus(SynthConfig(n_sessions=20, seed=2))
    assert a.event_log != b.event_log


def test_913_default_mix_gives_454_informational():
    counts = largest_remainder_counts(913, SynthConfig().class_mix)
    assert counts[IntentClass.INFORMATIONAL] == 454
    assert sum(counts) == 913


def test_largest_remainder_exactness():
    rng = np.random.Generator(np.random.PCG64(2))
    for _ in range(50):
        n = int(rng.integers(0, 500))
        raw = rng.random(3) + 0.01
        mix = tuple(raw / raw.sum())
        counts = largest_remainder_counts(n, mix)
        assert sum(counts) == n
        assert all(abs(c - n * m) < 1.0 for c, m in zip(counts, mix))


def test_generated_corpus_parses_cleanly_and_validates():
    corpus = generate_corpus(SynthConfig(n_sessions=50, seed=7))
    events, diags = parse_event_log(io.BytesIO(corpus.event_log.encode()))
    assert diags == []
    labels = load_labels(io.BytesIO(corpus.labels.encode()))
    rebuilt = build_corpus(events, labels)
    assert len(rebuilt.sessions) == 50
    assert rebuilt.label_coverage == 1.0
    for session in rebuilt.sessions:
        validate_session(session)
    records = load_knowledge(io.BytesIO(corpus.knowledge.encode()))
    assert len(records) == 50
    assert all(0.0 <= r.pre_score <= 1.0 and 0.0 <= r.post_score <= 1.0 for r in records)


def test_exact_mix_at_scale():
    corpus = generate_corpus(SynthConfig(n_sessions=1000, seed=13))
    counts = np.bincount([int(s.label) for s in corpus.sessions], minlength=3)
    expected = largest_remainder_counts(1000, SynthConfig().class_mix)
    assert tuple(counts) == expected


def test_default_profile_orderings():
    profiles = default_profiles()
    nav, inf = profiles[IntentClass.NAVIGATIONAL], profiles[IntentClass.INFORMATIONAL]
    assert nav.queries_per_session < inf.queries_per_session
    assert inf.revisit_prob > 0.0 and nav.revisit_prob == 0.0
    assert nav.break_prob == 0.0 and inf.break_prob > 0.0


def test_query_count_separation_two_standard_errors():
    corpus = generate_corpus(SynthConfig(n_sessions=1500, seed=11))
    table = extract_table(corpus.sessions, "intent-v1")
    col = INTENT_V1.index_of("query_count")
    y = np.array([int(s.label) for s in corpus.sessions])
    nav = table.X[y == IntentClass.NAVIGATIONAL, col]
    inf = table.X[y == IntentClass.INFORMATIONAL, col]
    se = np.sqrt(nav.var(ddof=1) / len(nav) + inf.var(ddof=1) / len(inf))
    assert inf.mean() - nav.mean() > 2 * se


def test_invalid_configs_rejected():
    with pytest.raises(InvalidConfig):
        SynthConfig(n_sessions=-1)
    with pytest.raises(InvalidConfig):
        SynthConfig(class_mix=(0.5, 0.5, 0.5))
    with pytest.raises(InvalidConfig):
        SynthConfig(class_mix=(1.0, 0.5, -0.5))


def test_config_from_json_overrides_and_defaults():
    cfg = config_from_json(json.dumps({
        "n_sessions": 10,
        "seed": 4,
        "class_mix": {"navigational": 0.5, "informational": 0.25, "transactional": 0.25},
        "profiles": {"navigational": {"clicks_per_query": 0.2}},
        "knowledge": {"informational": {"gain_mean": 0.5}},
    }))
    assert cfg.n_sessions == 10 and cfg.seed == 4
    assert cfg.class_mix == (0.5, 0.25, 0.25)
    assert cfg.profiles[IntentClass.NAVIGATIONAL].clicks_per_query == 0.2
    # untouched fields keep their defaults
    assert cfg.profiles[IntentClass.NAVIGATIONAL].query_terms == default_profiles()[IntentClass.NAVIGATIONAL].query_terms
    assert cfg.knowledge[IntentClass.INFORMATIONAL].gain_mean == 0.5
    assert cfg.knowledge[IntentClass.NAVIGATIONAL] == default_knowledge_profiles()[IntentClass.NAVIGATIONAL]


def test_config_rejects_unknown_keys():
    with pytest.raises(InvalidConfig):
        config_from_json('{"sessions": 5}')
    with pytest.raises(InvalidConfig):
        config_from_json('{"profiles": {"navigational": {"bogus": 1}}}')
    with pytest.raises(InvalidConfig):
        config_from_json("not json")
