"""Time-gap session segmentation for logs without explicit session ids.

The 30-minute default is a log-analysis convention, not a canonical value;
semantic segmentation is out of scope.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .events import Event, Session
from .exceptions import UnsortedInput

DEFAULT_GAP_MS = 30 * 60 * 1000


@dataclass(frozen=True)
class GapPolicy:
    gap_threshold_ms: int = DEFAULT_GAP_MS

    def __post_init__(self):
        if self.gap_threshold_ms <= 0:
            raise ValueError("gap_threshold_ms must be > 0")


def segment_by_gap(events: Sequence[Event], policy: GapPolicy = GapPolicy()) -> list[Session]:
    """Split one user's time-ordered events at inactivity gaps > threshold.

    Session ids are "<user_id>:<index>". The concatenation of the output
    sessions' events equals the input; no labels are attached.
    """
    if not events:
        return []
    user = events[0].user_id
    if any(e.user_id != user for e in events):
        raise ValueError("segment_by_gap expects events of a single user")
    for prev, cur in zip(events, events[1:]):
        if cur.timestamp < prev.timestamp:
            raise UnsortedInput("events must be sorted by timestamp")

    sessions: list[Session] = []
    start = 0
    for i in range(1, len(events)):
        if events[i].timestamp - events[i - 1].timestamp > policy.gap_threshold_ms:
            sessions.append(_make(user, len(sessions), events[start:i]))
            start = i
    sessions.append(_make(user, len(sessions), events[start:]))
    return sessions


def _make(user: str, index: int, chunk: Sequence[Event]) -> Session:
    return Session(f"{user}:{index}", user, tuple(chunk))
