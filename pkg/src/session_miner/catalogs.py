"""Versioned feature catalogs.

Two catalogs are frozen here and documented in docs/feature-catalogs.md:

* intent-v1     22 features  (Query 7, Session 7, Browsing 8)
* knowledge-v1  79 features  (Query 20, SERP 18, Browsing 21, Mouse 20)

Entry order is the vector order and must never change within a version.
Feature names double as definition ids into the extractor.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    category: str


@dataclass(frozen=True)
class FeatureCatalog:
    name: str
    entries: tuple[CatalogEntry, ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def names(self) -> tuple[str, ...]:
        return tuple(e.name for e in self.entries)

    def category_of(self, feature_name: str) -> str:
        for entry in self.entries:
            if entry.name == feature_name:
                return entry.category
        raise KeyError(feature_name)

    def index_of(self, feature_name: str) -> int:
        for i, entry in enumerate(self.entries):
            if entry.name == feature_name:
                return i
        raise KeyError(feature_name)


def _entries(category: str, names: list[str]) -> list[CatalogEntry]:
    return [CatalogEntry(name, category) for name in names]


INTENT_V1 = FeatureCatalog(
    "intent-v1",
    tuple(
        _entries("Query", [
            "query_terms_mean",
            "query_terms_max",
            "query_terms_min",
            "query_chars_mean",
            "consecutive_query_jaccard_mean",
            "consecutive_query_jaccard_max",
            "consecutive_query_shared_term_fraction",
        ])
        + _entries("Session", [
            "query_count",
            "session_duration_s",
            "inter_query_interval_mean_s",
            "inter_query_interval_max_s",
            "break_count",
            "break_duration_mean_s",
            "break_time_fraction",
        ])
        + _entries("Browsing", [
            "click_count",
            "clicks_per_query_mean",
            "distinct_clicked_urls",
            "revisited_click_count",
            "click_revisit_ratio",
            "query_click_jaccard_mean",
            "query_click_jaccard_max",
            "zero_click_query_fraction",
        ])
    ),
)

KNOWLEDGE_V1 = FeatureCatalog(
    "knowledge-v1",
    tuple(
        _entries("Query", [
            "query_count",
            "query_terms_total",
            "query_terms_mean",
            "query_terms_max",
            "query_terms_min",
            "query_terms_var",
            "query_chars_mean",
            "query_chars_max",
            "query_chars_min",
            "query_chars_var",
            "query_complexity_mean",
            "query_complexity_max",
            "query_complexity_min",
            "unique_term_count",
            "unique_term_ratio",
            "consecutive_query_jaccard_mean",
            "consecutive_query_jaccard_max",
            "consecutive_query_shared_term_fraction",
            "inter_query_interval_mean_s",
            "inter_query_interval_max_s",
        ])
        + _entries("SERP", [
            "click_count",
            "click_through_ratio",
            "clicks_per_query_max",
            "clicks_per_query_min",
            "clicks_per_query_var",
            "zero_click_query_fraction",
            "queries_with_click_count",
            "distinct_clicked_urls",
            "revisited_click_count",
            "click_revisit_ratio",
            "click_rank_mean",
            "click_rank_max",
            "click_rank_min",
            "click_rank_var",
            "rank_one_click_fraction",
            "rank_top3_click_fraction",
            "query_click_jaccard_mean",
            "query_click_jaccard_max",
        ])
        + _entries("Browsing", [
            "pageview_count",
            "dwell_total_s",
            "dwell_mean_s",
            "dwell_max_s",
            "dwell_min_s",
            "dwell_var_s",
            "distinct_viewed_urls",
            "revisited_pageview_count",
            "pageview_revisit_ratio",
            "pageviews_per_query",
            "pageview_scroll_total",
            "pageview_scroll_mean",
            "pageview_scroll_max",
            "pageview_scroll_var",
            "pageview_mouseover_total",
            "pageview_mouseover_mean",
            "pageview_mouseover_max",
            "pageview_mouseover_var",
            "dwell_fraction_of_session",
            "pageviews_per_minute",
            "pageview_scroll_per_dwell_s",
        ])
        + _entries("Mouse", [
            "mouse_event_count",
            "mouse_scroll_total",
            "mouse_scroll_mean",
            "mouse_scroll_max",
            "mouse_scroll_var",
            "mouseover_total",
            "mouseover_mean",
            "mouseover_max",
            "mouseover_var",
            "mouse_move_total",
            "mouse_move_mean",
            "mouse_move_max",
            "mouse_move_var",
            "mouse_events_per_query",
            "mouse_scroll_per_query",
            "mouseover_per_query",
            "mouse_move_per_query",
            "mouse_scroll_per_minute",
            "mouseover_per_minute",
            "mouse_move_per_minute",
        ])
    ),
)

CATALOGS: dict[str, FeatureCatalog] = {c.name: c for c in (INTENT_V1, KNOWLEDGE_V1)}

# ratios that may exceed 1 by definition (everything else named *_ratio/_fraction is in [0, 1])
UNBOUNDED_RATIOS = frozenset({
    "clicks_per_query_mean",
    "click_through_ratio",
    "clicks_per_query_max",
    "clicks_per_query_min",
    "pageviews_per_query",
    "mouse_events_per_query",
})


def get_catalog(name: str) -> FeatureCatalog:
    try:
        return CATALOGS[name]
    except KeyError:
        raise ValueError(f"unknown feature catalog {name!r}") from None
