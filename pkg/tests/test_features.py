import numpy as np
import pytest

from session_miner.catalogs import INTENT_V1, KNOWLEDGE_V1, UNBOUNDED_RATIOS
from session_miner.events import (
    click_event,
    mouse_event,
    page_view_event,
    query_event,
)
from session_miner.features import (
    SessionFeaturizer,
    extract_intent_vector,
    extract_knowledge_vector,
    feature_values,
    jaccard,
    url_tokens,
)
from session_miner.synth import SynthConfig, generate_corpus

from conftest import make_session


def vec_map(fv, catalog):
    return dict(zip(catalog.names(), fv.values))


# ---- jaccard -------------------------------------------------------------


def test_jaccard_identity():
    assert jaccard({"paris", "weather"}, {"paris", "weather"}) == 1.0


def test_jaccard_disjoint():
    assert jaccard({"a"}, {"b"}) == 0.0


def test_jaccard_half():
    # 2 shared / 4 in the union
    assert jaccard({"a", "b", "c"}, {"b", "c", "d"}) == 0.5


def test_jaccard_empty_convention():
    assert jaccard(set(), set()) == 0.0


def test_jaccard_symmetric_and_one_iff_equal():
    rng = np.random.Generator(np.random.PCG64(3))
    vocab = [f"w{i}" for i in range(12)]
    for _ in range(200):
        a = set(rng.choice(vocab, size=rng.integers(0, 6), replace=False))
        b = set(rng.choice(vocab, size=rng.integers(0, 6), replace=False))
        assert jaccard(a, b) == jaccard(b, a)
        assert (jaccard(a, b) == 1.0) == (a == b and bool(a))


def test_url_tokens_drop_scheme_and_short():
    tokens = url_tokens("https://www.meteo.example/paris/a/weather-now")
    assert "https" not in tokens and "www" not in tokens
    assert "a" not in tokens
    assert {"meteo", "example", "paris", "weather", "now"} <= set(tokens)


# ---- intent vector ---------------------------------------------------------


def test_intent_worked_example_two_queries_no_clicks():
    s = make_session(events=[
        query_event("u", 0, "paris weather", session_id="s1"),
        query_event("u", 1_000, "paris weather forecast", session_id="s1"),
    ])
    m = vec_map(extract_intent_vector(s), INTENT_V1)
    assert m["query_terms_mean"] == pytest.approx(2.5)
    assert m["consecutive_query_jaccard_mean"] == pytest.approx(2 / 3)
    assert m["consecutive_query_jaccard_max"] == pytest.approx(2 / 3)
    assert m["click_count"] == 0.0
    assert m["zero_click_query_fraction"] == 1.0


def test_intent_single_event_session_defaults():
    fv = extract_intent_vector(make_session())
    assert len(fv.values) == 22
    m = vec_map(fv, INTENT_V1)
    assert m["session_duration_s"] == 0.0
    assert m["break_count"] == 0.0
    assert m["consecutive_query_jaccard_mean"] == 0.0
    assert m["inter_query_interval_mean_s"] == 0.0


def test_extraction_is_deterministic(browsing_session):
    a = extract_intent_vector(browsing_session)
    b = extract_intent_vector(browsing_session)
    assert a == b


def test_intent_browsing_features(browsing_session):
    m = vec_map(extract_intent_vector(browsing_session), INTENT_V1)
    assert m["click_count"] == 2.0
    assert m["distinct_clicked_urls"] == 1.0
    assert m["revisited_click_count"] == 1.0
    assert m["click_revisit_ratio"] == 0.5
    assert m["clicks_per_query_mean"] == 1.0
    assert m["zero_click_query_fraction"] == 0.0
    # jaccard({paris,weather}, {meteo,example,paris,weather}) = 2/4
    assert m["query_click_jaccard_max"] == pytest.approx(0.5)


def test_break_features(browsing_session):
    # single gap of 95 s between t=5000 and t=100000 exceeds the 60 s default
    m = vec_map(extract_intent_vector(browsing_session), INTENT_V1)
    assert m["break_count"] == 1.0
    assert m["break_duration_mean_s"] == pytest.approx(95.0)
    assert m["break_time_fraction"] == pytest.approx(95.0 / 103.0)
    # a larger threshold removes the break
    relaxed = vec_map(extract_intent_vector(browsing_session, break_sec=120.0), INTENT_V1)
    assert relaxed["break_count"] == 0.0


# ---- knowledge vector -------------------------------------------------------


def test_knowledge_click_through_example():
    events = [query_event("u", 0, "a b", session_id="s")]
    for i in range(4):
        events.append(click_event("u", 10 + i, f"https://x.example/p{i}", serp_rank=i + 1, query_index=0, session_id="s"))
    events.append(query_event("u", 100, "c d", session_id="s"))
    s = make_session(events=events)
    m = vec_map(extract_knowledge_vector(s), KNOWLEDGE_V1)
    assert m["click_count"] == 4.0
    assert m["click_through_ratio"] == 2.0


def test_knowledge_browsing_and_mouse_zero_without_those_events():
    s = make_session(events=[
        query_event("u", 0, "a", session_id="s"),
        click_event("u", 5, "https://x.example/a", serp_rank=1, query_index=0, session_id="s"),
        query_event("u", 200_000, "b", session_id="s"),
    ])
    fv = extract_knowledge_vector(s)
    assert len(fv.values) == 79
    zeroed = [
        e.name for e in KNOWLEDGE_V1.entries if e.category in ("Browsing", "Mouse")
    ]
    assert len(zeroed) == 41
    m = vec_map(fv, KNOWLEDGE_V1)
    assert all(m[name] == 0.0 for name in zeroed)


def test_shared_signals_agree_across_catalogs(browsing_session):
    mi = vec_map(extract_intent_vector(browsing_session), INTENT_V1)
    mk = vec_map(extract_knowledge_vector(browsing_session), KNOWLEDGE_V1)
    for name in ("click_count", "query_count", "consecutive_query_jaccard_mean", "zero_click_query_fraction"):
        assert mi[name] == mk[name]


def test_click_pairing_falls_back_to_preceding_query():
    events = [
        query_event("u", 0, "alpha beta", session_id="s"),
        click_event("u", 10, "https://x.example/alpha", serp_rank=1, session_id="s"),  # no qi
        query_event("u", 20, "gamma", session_id="s"),
        click_event("u", 30, "https://x.example/gamma", serp_rank=1, session_id="s"),
    ]
    m = feature_values(make_session(events=events))
    assert m["zero_click_query_fraction"] == 0.0
    assert m["clicks_per_query_mean"] == 1.0


def test_rank_zero_means_unknown():
    events = [
        query_event("u", 0, "a", session_id="s"),
        click_event("u", 10, "https://x.example/1", serp_rank=0, query_index=0, session_id="s"),
        click_event("u", 20, "https://x.example/2", serp_rank=3, query_index=0, session_id="s"),
    ]
    m = feature_values(make_session(events=events))
    assert m["click_rank_mean"] == 3.0  # unknown rank excluded
    assert m["rank_top3_click_fraction"] == 1.0


# ---- invariants --------------------------------------------------------------


def _synthetic_sessions(n=60, seed=5):
    return generate_corpus(SynthConfig(n_sessions=n, seed=seed)).sessions


def test_vector_lengths_on_synthetic_corpus():
    for s in _synthetic_sessions():
        assert len(extract_intent_vector(s).values) == 22
        assert len(extract_knowledge_vector(s).values) == 79


def test_all_features_finite_counts_nonnegative_ratios_bounded():
    for s in _synthetic_sessions():
        for catalog, fv in (
            (INTENT_V1, extract_intent_vector(s)),
            (KNOWLEDGE_V1, extract_knowledge_vector(s)),
        ):
            values = vec_map(fv, catalog)
            for name, v in values.items():
                assert np.isfinite(v), name
                if name.endswith(("_count", "_total")) or name.startswith(("query_count", "click_count", "pageview_count")):
                    assert v >= 0.0, name
                tokens = name.split("_")
                if ("ratio" in tokens or "fraction" in tokens) and name not in UNBOUNDED_RATIOS:
                    assert 0.0 <= v <= 1.0, name


def test_same_timestamp_non_query_events_commute():
    """Features depend on event multisets and the ordered query sequence only,
    so shuffling simultaneous non-query events cannot move any feature."""
    u = "u"
    base = [
        query_event(u, 0, "alpha beta", session_id="s"),
        click_event(u, 10, "https://x.example/alpha", serp_rank=1, query_index=0, session_id="s"),
        page_view_event(u, 10, "https://x.example/alpha", dwell_ms=100, scroll_px=5, mouseover_count=1, session_id="s"),
        mouse_event(u, 10, scroll_px=3, mouseover_count=2, move_px=7, session_id="s"),
        query_event(u, 50, "alpha gamma", session_id="s"),
    ]
    reference = extract_knowledge_vector(make_session(events=base))
    swapped = [base[0], base[3], base[1], base[2], base[4]]
    assert extract_knowledge_vector(make_session(events=swapped)) == reference


def test_featurizer_matrix_shape_and_params():
    sessions = _synthetic_sessions(n=10)
    feat = SessionFeaturizer(catalog="knowledge-v1")
    X = feat.fit_transform(sessions)
    assert X.shape == (10, 79)
    assert feat.get_params() == {"catalog": "knowledge-v1", "break_sec": 60.0}
    feat.set_params(break_sec=30.0)
    assert feat.break_sec == 30.0
    with pytest.raises(ValueError):
        feat.set_params(bogus=1)
