"""Event/session data model and the intent label taxonomy.

All types are immutable values; they can be shared freely between workers.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum, IntEnum

from .exceptions import EmptySession, NoQueryEvent, UnknownLabel, UnorderedTimestamps


def tokenize_query(text: str) -> tuple[str, ...]:
    """Lowercase, split on whitespace, drop empty tokens. No stemming, no stop words."""
    return tuple(tok for tok in text.lower().split() if tok)


class IntentClass(IntEnum):
    """Broder-style session intent, canonical ordinal encoding."""

    NAVIGATIONAL = 0
    INFORMATIONAL = 1
    TRANSACTIONAL = 2

    @property
    def label(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "IntentClass":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise UnknownLabel(f"unknown intent label {name!r}") from None


INTENT_CLASS_NAMES: tuple[str, ...] = tuple(c.label for c in IntentClass)


class EventKind(str, Enum):
    QUERY = "q"
    CLICK = "c"
    PAGE_VIEW = "v"
    MOUSE = "m"


@dataclass(frozen=True)
class QueryPayload:
    query_text: str
    query_terms: tuple[str, ...]

    def __post_init__(self):
        if self.query_terms != tokenize_query(self.query_text):
            raise ValueError("query_terms must be the tokenization of query_text")


@dataclass(frozen=True)
class ClickPayload:
    serp_rank: int  # 1-based, 0 = unknown
    url: str
    query_index: int | None = None  # index of issuing query within the session

    def __post_init__(self):
        if self.serp_rank < 0:
            raise ValueError("serp_rank must be >= 0")
        if self.query_index is not None and self.query_index < 0:
            raise ValueError("query_index must be >= 0")


@dataclass(frozen=True)
class PageViewPayload:
    url: str
    dwell_ms: int = 0
    scroll_px: int = 0
    mouseover_count: int = 0

    def __post_init__(self):
        if min(self.dwell_ms, self.scroll_px, self.mouseover_count) < 0:
            raise ValueError("page view counters must be >= 0")


@dataclass(frozen=True)
class MousePayload:
    scroll_px: int = 0
    mouseover_count: int = 0
    move_px: int = 0

    def __post_init__(self):
        if min(self.scroll_px, self.mouseover_count, self.move_px) < 0:
            raise ValueError("mouse counters must be >= 0")


Payload = QueryPayload | ClickPayload | PageViewPayload | MousePayload

_PAYLOAD_KINDS = {
    QueryPayload: EventKind.QUERY,
    ClickPayload: EventKind.CLICK,
    PageViewPayload: EventKind.PAGE_VIEW,
    MousePayload: EventKind.MOUSE,
}


@dataclass(frozen=True)
class Event:
    """One timestamped searcher action.

    session_id is optional: logs may carry explicit session ids (grouping
    "by-field") or leave assignment to time-gap segmentation.
    """

    user_id: str
    timestamp: int  # milliseconds since epoch, UTC
    kind: EventKind
    payload: Payload
    session_id: str | None = None

    def __post_init__(self):
        if self.timestamp < 0:
            raise ValueError("timestamp must be >= 0")
        expected = _PAYLOAD_KINDS[type(self.payload)]
        if self.kind is not expected:
            raise ValueError(f"payload {type(self.payload).__name__} requires kind {expected}")


def query_event(user_id: str, timestamp: int, text: str, session_id: str | None = None) -> Event:
    payload = QueryPayload(query_text=text, query_terms=tokenize_query(text))
    return Event(user_id, timestamp, EventKind.QUERY, payload, session_id)


def click_event(
    user_id: str,
    timestamp: int,
    url: str,
    serp_rank: int = 0,
    query_index: int | None = None,
    session_id: str | None = None,
) -> Event:
    return Event(user_id, timestamp, EventKind.CLICK, ClickPayload(serp_rank, url, query_index), session_id)


def page_view_event(
    user_id: str,
    timestamp: int,
    url: str,
    dwell_ms: int = 0,
    scroll_px: int = 0,
    mouseover_count: int = 0,
    session_id: str | None = None,
) -> Event:
    payload = PageViewPayload(url, dwell_ms, scroll_px, mouseover_count)
    return Event(user_id, timestamp, EventKind.PAGE_VIEW, payload, session_id)


def mouse_event(
    user_id: str,
    timestamp: int,
    scroll_px: int = 0,
    mouseover_count: int = 0,
    move_px: int = 0,
    session_id: str | None = None,
) -> Event:
    payload = MousePayload(scroll_px, mouseover_count, move_px)
    return Event(user_id, timestamp, EventKind.MOUSE, payload, session_id)


@dataclass(frozen=True)
class Session:
    """Time-ordered events of one user sharing an information need."""

    session_id: str
    user_id: str
    events: tuple[Event, ...]
    label: IntentClass | None = None


def validate_session(session: Session) -> Session:
    """Check the Session invariants; return the session unchanged when they hold.

    Idempotent: validating a validated session is a no-op.
    """
    if not session.events:
        raise EmptySession(f"session {session.session_id!r} has no events")
    times = [e.timestamp for e in session.events]
    if any(b < a for a, b in zip(times, times[1:])):
        raise UnorderedTimestamps(f"session {session.session_id!r} has decreasing timestamps")
    if not any(e.kind is EventKind.QUERY for e in session.events):
        raise NoQueryEvent(f"session {session.session_id!r} contains no query event")
    return session
