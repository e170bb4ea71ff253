"""Session -> feature vector extraction for both catalogs.

All features are plain aggregates of one session's events; every degenerate
statistic (no clicks, single query, ...) defaults to 0 so downstream models
never see NaN. Shared feature names are computed once, so duplicated signals
agree across catalogs by construction.
"""
from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .base import ParamsMixin
from .catalogs import FeatureCatalog, get_catalog
from .events import Event, EventKind, Session
from .exceptions import HeaderError

FEATURES_HEADER = "#session-miner-features v1"

_URL_SPLIT = re.compile(r"[^0-9a-zA-Z]+")
_URL_STOP = {"http", "https", "ftp", "www"}


def jaccard(a: Iterable[str], b: Iterable[str]) -> float:
    """|a∩b| / |a∪b| over term sets; 0 when both are empty."""
    sa, sb = set(a), set(b)
    union = sa | sb
    if not union:
        return 0.0
    return len(sa & sb) / len(union)


def url_tokens(url: str) -> tuple[str, ...]:
    """Tokenize a URL: split on non-alphanumerics, lowercase, drop scheme/"www" and tokens < 2 chars."""
    tokens = _URL_SPLIT.split(url.lower())
    return tuple(t for t in tokens if len(t) >= 2 and t not in _URL_STOP)


def _mean(xs) -> float:
    xs = list(xs)
    return sum(xs) / len(xs) if xs else 0.0


def _var(xs) -> float:
    xs = list(xs)
    if len(xs) < 2:
        return 0.0
    m = sum(xs) / len(xs)
    return sum((x - m) ** 2 for x in xs) / len(xs)


def _max(xs) -> float:
    xs = list(xs)
    return max(xs) if xs else 0.0


def _min(xs) -> float:
    xs = list(xs)
    return min(xs) if xs else 0.0


def _ratio(num: float, den: float) -> float:
    return num / den if den else 0.0


def feature_values(session: Session, break_sec: float = 60.0) -> dict[str, float]:
    """Compute every named feature of both catalogs for one session.

    Click->query pairing uses the click's explicit query_index when present
    and falls back to the most recent preceding query event.
    """
    events = session.events
    queries = [e for e in events if e.kind is EventKind.QUERY]
    views = [e for e in events if e.kind is EventKind.PAGE_VIEW]
    mouse = [e for e in events if e.kind is EventKind.MOUSE]

    # clicks paired with the index of their issuing query
    clicks: list[tuple[Event, int | None]] = []
    seen_queries = -1
    for e in events:
        if e.kind is EventKind.QUERY:
            seen_queries += 1
        elif e.kind is EventKind.CLICK:
            qi = e.payload.query_index
            if qi is None:
                qi = seen_queries if seen_queries >= 0 else None
            elif qi >= len(queries):
                qi = None
            clicks.append((e, qi))
    n_queries = len(queries)
    n_clicks = len(clicks)

    out: dict[str, float] = {}

    # ---- query text ----------------------------------------------------
    term_counts = [len(q.payload.query_terms) for q in queries]
    char_counts = [len(q.payload.query_text) for q in queries]
    complexities = [
        _ratio(sum(len(t) for t in q.payload.query_terms), len(q.payload.query_terms))
        for q in queries
    ]
    all_terms = [t for q in queries for t in q.payload.query_terms]
    out["query_count"] = float(n_queries)
    out["query_terms_total"] = float(sum(term_counts))
    out["query_terms_mean"] = _mean(term_counts)
    out["query_terms_max"] = _max(term_counts)
    out["query_terms_min"] = _min(term_counts)
    out["query_terms_var"] = _var(term_counts)
    out["query_chars_mean"] = _mean(char_counts)
    out["query_chars_max"] = _max(char_counts)
    out["query_chars_min"] = _min(char_counts)
    out["query_chars_var"] = _var(char_counts)
    out["query_complexity_mean"] = _mean(complexities)
    out["query_complexity_max"] = _max(complexities)
    out["query_complexity_min"] = _min(complexities)
    out["unique_term_count"] = float(len(set(all_terms)))
    out["unique_term_ratio"] = _ratio(len(set(all_terms)), len(all_terms))

    pair_jaccards = [
        jaccard(a.payload.query_terms, b.payload.query_terms)
        for a, b in zip(queries, queries[1:])
    ]
    pair_shared = [
        bool(set(a.payload.query_terms) & set(b.payload.query_terms))
        for a, b in zip(queries, queries[1:])
    ]
    out["consecutive_query_jaccard_mean"] = _mean(pair_jaccards)
    out["consecutive_query_jaccard_max"] = _max(pair_jaccards)
    out["consecutive_query_shared_term_fraction"] = _mean([1.0 if s else 0.0 for s in pair_shared])

    # ---- session timing ------------------------------------------------
    duration_ms = events[-1].timestamp - events[0].timestamp if events else 0
    gaps_ms = [b.timestamp - a.timestamp for a, b in zip(events, events[1:])]
    break_ms = break_sec * 1000.0
    breaks = [g for g in gaps_ms if g > break_ms]
    intervals_s = [(b.timestamp - a.timestamp) / 1000.0 for a, b in zip(queries, queries[1:])]
    out["session_duration_s"] = duration_ms / 1000.0
    out["inter_query_interval_mean_s"] = _mean(intervals_s)
    out["inter_query_interval_max_s"] = _max(intervals_s)
    out["break_count"] = float(len(breaks))
    out["break_duration_mean_s"] = _mean(breaks) / 1000.0 if breaks else 0.0
    out["break_time_fraction"] = _ratio(sum(breaks), duration_ms)

    # ---- clicks / SERP ---------------------------------------------------
    per_query_clicks = [0] * n_queries
    for _, qi in clicks:
        if qi is not None:
            per_query_clicks[qi] += 1
    click_urls = [c.payload.url for c, _ in clicks]
    distinct_urls = len(set(click_urls))
    revisited = n_clicks - distinct_urls
    ranks = [c.payload.serp_rank for c, _ in clicks if c.payload.serp_rank > 0]
    click_jaccards = [
        jaccard(queries[qi].payload.query_terms, url_tokens(c.payload.url))
        for c, qi in clicks
        if qi is not None
    ]
    out["click_count"] = float(n_clicks)
    out["clicks_per_query_mean"] = _mean(per_query_clicks)
    out["click_through_ratio"] = _ratio(n_clicks, n_queries)
    out["clicks_per_query_max"] = _max(per_query_clicks)
    out["clicks_per_query_min"] = _min(per_query_clicks)
    out["clicks_per_query_var"] = _var(per_query_clicks)
    out["zero_click_query_fraction"] = _mean([1.0 if c == 0 else 0.0 for c in per_query_clicks])
    out["queries_with_click_count"] = float(sum(1 for c in per_query_clicks if c > 0))
    out["distinct_clicked_urls"] = float(distinct_urls)
    out["revisited_click_count"] = float(revisited)
    out["click_revisit_ratio"] = _ratio(revisited, n_clicks)
    out["click_rank_mean"] = _mean(ranks)
    out["click_rank_max"] = _max(ranks)
    out["click_rank_min"] = _min(ranks)
    out["click_rank_var"] = _var(ranks)
    out["rank_one_click_fraction"] = _ratio(sum(1 for r in ranks if r == 1), len(ranks))
    out["rank_top3_click_fraction"] = _ratio(sum(1 for r in ranks if r <= 3), len(ranks))
    out["query_click_jaccard_mean"] = _mean(click_jaccards)
    out["query_click_jaccard_max"] = _max(click_jaccards)

    # ---- page views ------------------------------------------------------
    dwells_s = [v.payload.dwell_ms / 1000.0 for v in views]
    view_urls = [v.payload.url for v in views]
    view_scrolls = [v.payload.scroll_px for v in views]
    view_mos = [v.payload.mouseover_count for v in views]
    duration_min = duration_ms / 60000.0
    out["pageview_count"] = float(len(views))
    out["dwell_total_s"] = sum(dwells_s)
    out["dwell_mean_s"] = _mean(dwells_s)
    out["dwell_max_s"] = _max(dwells_s)
    out["dwell_min_s"] = _min(dwells_s)
    out["dwell_var_s"] = _var(dwells_s)
    out["distinct_viewed_urls"] = float(len(set(view_urls)))
    out["revisited_pageview_count"] = float(len(views) - len(set(view_urls)))
    out["pageview_revisit_ratio"] = _ratio(len(views) - len(set(view_urls)), len(views))
    out["pageviews_per_query"] = _ratio(len(views), n_queries)
    out["pageview_scroll_total"] = float(sum(view_scrolls))
    out["pageview_scroll_mean"] = _mean(view_scrolls)
    out["pageview_scroll_max"] = _max(view_scrolls)
    out["pageview_scroll_var"] = _var(view_scrolls)
    out["pageview_mouseover_total"] = float(sum(view_mos))
    out["pageview_mouseover_mean"] = _mean(view_mos)
    out["pageview_mouseover_max"] = _max(view_mos)
    out["pageview_mouseover_var"] = _var(view_mos)
    out["dwell_fraction_of_session"] = min(1.0, _ratio(sum(dwells_s), duration_ms / 1000.0))
    out["pageviews_per_minute"] = _ratio(len(views), duration_min)
    out["pageview_scroll_per_dwell_s"] = _ratio(sum(view_scrolls), sum(dwells_s))

    # ---- mouse -----------------------------------------------------------
    m_scrolls = [m.payload.scroll_px for m in mouse]
    m_mos = [m.payload.mouseover_count for m in mouse]
    m_moves = [m.payload.move_px for m in mouse]
    out["mouse_event_count"] = float(len(mouse))
    out["mouse_scroll_total"] = float(sum(m_scrolls))
    out["mouse_scroll_mean"] = _mean(m_scrolls)
    out["mouse_scroll_max"] = _max(m_scrolls)
    out["mouse_scroll_var"] = _var(m_scrolls)
    out["mouseover_total"] = float(sum(m_mos))
    out["mouseover_mean"] = _mean(m_mos)
    out["mouseover_max"] = _max(m_mos)
    out["mouseover_var"] = _var(m_mos)
    out["mouse_move_total"] = float(sum(m_moves))
    out["mouse_move_mean"] = _mean(m_moves)
    out["mouse_move_max"] = _max(m_moves)
    out["mouse_move_var"] = _var(m_moves)
    out["mouse_events_per_query"] = _ratio(len(mouse), n_queries)
    out["mouse_scroll_per_query"] = _ratio(sum(m_scrolls), n_queries)
    out["mouseover_per_query"] = _ratio(sum(m_mos), n_queries)
    out["mouse_move_per_query"] = _ratio(sum(m_moves), n_queries)
    out["mouse_scroll_per_minute"] = _ratio(sum(m_scrolls), duration_min)
    out["mouseover_per_minute"] = _ratio(sum(m_mos), duration_min)
    out["mouse_move_per_minute"] = _ratio(sum(m_moves), duration_min)

    return out


@dataclass(frozen=True)
class FeatureVector:
    catalog: str
    values: tuple[float, ...]


def _extract(session: Session, catalog: FeatureCatalog, break_sec: float) -> FeatureVector:
    values = feature_values(session, break_sec=break_sec)
    vec = tuple(float(values[e.name]) for e in catalog.entries)
    if not all(np.isfinite(vec)):
        raise ValueError(f"non-finite feature value for session {session.session_id!r}")
    return FeatureVector(catalog.name, vec)


def extract_intent_vector(session: Session, break_sec: float = 60.0) -> FeatureVector:
    """22-value intent-v1 vector (Query / Session / Browsing)."""
    return _extract(session, get_catalog("intent-v1"), break_sec)


def extract_knowledge_vector(session: Session, break_sec: float = 60.0) -> FeatureVector:
    """79-value knowledge-v1 vector (Query / SERP / Browsing / Mouse)."""
    return _extract(session, get_catalog("knowledge-v1"), break_sec)


class SessionFeaturizer(ParamsMixin):
    """Stateless sessions -> matrix transformer (fit is a no-op, kept for pipeline compatibility)."""

    def __init__(self, catalog: str = "intent-v1", break_sec: float = 60.0):
        self.catalog = catalog
        self.break_sec = break_sec

    def fit(self, sessions=None, y=None):
        get_catalog(self.catalog)
        return self

    def transform(self, sessions: Sequence[Session]) -> np.ndarray:
        cat = get_catalog(self.catalog)
        rows = [_extract(s, cat, self.break_sec).values for s in sessions]
        return np.asarray(rows, dtype=float).reshape(len(rows), cat.size)

    def fit_transform(self, sessions: Sequence[Session], y=None) -> np.ndarray:
        return self.fit(sessions).transform(sessions)

    def feature_names(self) -> tuple[str, ...]:
        return get_catalog(self.catalog).names()


# ---- feature matrix file -----------------------------------------------------


@dataclass
class FeatureTable:
    """A feature matrix with row ids and optional string labels."""

    catalog: str
    session_ids: list[str]
    labels: list[str | None]
    X: np.ndarray

    def labeled(self) -> "FeatureTable":
        keep = [i for i, lab in enumerate(self.labels) if lab is not None]
        return FeatureTable(
            self.catalog,
            [self.session_ids[i] for i in keep],
            [self.labels[i] for i in keep],
            self.X[keep] if len(keep) else self.X[:0],
        )

    def y(self, class_names: Sequence[str]) -> np.ndarray:
        index = {name: i for i, name in enumerate(class_names)}
        try:
            return np.asarray([index[lab] for lab in self.labels], dtype=int)
        except KeyError as exc:
            raise ValueError(f"label {exc.args[0]!r} not in classes {list(class_names)}") from None


def extract_table(sessions: Sequence[Session], catalog: str, break_sec: float = 60.0) -> FeatureTable:
    X = SessionFeaturizer(catalog, break_sec).fit_transform(sessions)
    labels = [s.label.label if s.label is not None else None for s in sessions]
    return FeatureTable(catalog, [s.session_id for s in sessions], labels, X)


def feature_csv_text(table: FeatureTable) -> str:
    names = get_catalog(table.catalog).names()
    buf = io.StringIO()
    buf.write(f"{FEATURES_HEADER} catalog={table.catalog}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["session_id", "label", *names])
    for sid, label, row in zip(table.session_ids, table.labels, table.X):
        writer.writerow([sid, label or "", *[repr(float(v)) for v in row]])
    return buf.getvalue()


def write_feature_csv(table: FeatureTable, stream: IO[str]) -> None:
    stream.write(feature_csv_text(table))


def read_feature_csv(stream: IO[str]) -> FeatureTable:
    first = stream.readline().rstrip("\n")
    if not first.startswith(FEATURES_HEADER) or "catalog=" not in first:
        raise HeaderError(f"feature file must start with {FEATURES_HEADER!r} catalog=<name>")
    catalog = get_catalog(first.split("catalog=", 1)[1].strip())
    reader = csv.reader(stream)
    header = next(reader, None)
    expected = ["session_id", "label", *catalog.names()]
    if header != expected:
        raise HeaderError("feature file columns do not match the catalog")
    ids: list[str] = []
    labels: list[str | None] = []
    rows: list[list[float]] = []
    for row in reader:
        if not row:
            continue
        ids.append(row[0])
        labels.append(row[1] or None)
        rows.append([float(v) for v in row[2:]])
    X = np.asarray(rows, dtype=float).reshape(len(rows), catalog.size)
    return FeatureTable(catalog.name, ids, labels, X)
