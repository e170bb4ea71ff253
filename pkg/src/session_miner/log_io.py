"""Event-log and label-file parsing: the corpus gateway.

Formats (both UTF-8, versioned by a required first header line):

* Event log, one JSON object per line after ``#session-miner-log v1``.
  Keys: ``u`` user, ``t`` epoch ms, ``k`` kind (q/c/v/m), optional ``sid``,
  plus kind fields  q:{text}  c:{rank,url[,qi]}  v:{url,dwell,scroll,mo}
  m:{scroll,mo,move}.
* Label file, ``#session-miner-labels v1`` then ``session_id<TAB>label`` lines.

The writer emits a canonical encoding (fixed key order, no spaces), so
parse -> write round-trips canonical input byte for byte. Malformed event
lines are skipped with a diagnostic; label files are parsed strictly.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import IO, Iterable, Mapping

from .events import (
    ClickPayload,
    Event,
    EventKind,
    IntentClass,
    MousePayload,
    PageViewPayload,
    Session,
    query_event,
    validate_session,
)
from .exceptions import (
    DuplicateConflict,
    HeaderError,
    MissingSessionId,
    SessionMinerError,
    UnreadableStream,
)
from .segmentation import GapPolicy, segment_by_gap

LOG_HEADER = "#session-miner-log v1"
LABELS_HEADER = "#session-miner-labels v1"

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LineDiagnostic:
    line_no: int  # 1-based, counting the header line
    reason: str


@dataclass(frozen=True)
class Corpus:
    sessions: tuple[Session, ...]
    label_coverage: float


def _require_int(obj, key, minimum=0) -> int:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"field {key!r} must be an integer")
    if value < minimum:
        raise ValueError(f"field {key!r} must be >= {minimum}")
    return value


def _require_str(obj, key) -> str:
    value = obj[key]
    if not isinstance(value, str):
        raise ValueError(f"field {key!r} must be a string")
    return value


def _event_from_obj(obj: dict) -> Event:
    user = _require_str(obj, "u")
    ts = _require_int(obj, "t")
    kind = _require_str(obj, "k")
    sid = obj.get("sid")
    if sid is not None and not isinstance(sid, str):
        raise ValueError("field 'sid' must be a string")
    if kind == "q":
        return query_event(user, ts, _require_str(obj, "text"), session_id=sid)
    if kind == "c":
        qi = obj.get("qi")
        if qi is not None:
            qi = _require_int(obj, "qi")
        payload = ClickPayload(_require_int(obj, "rank"), _require_str(obj, "url"), qi)
        return Event(user, ts, EventKind.CLICK, payload, sid)
    if kind == "v":
        payload = PageViewPayload(
            _require_str(obj, "url"),
            _require_int(obj, "dwell"),
            _require_int(obj, "scroll"),
            _require_int(obj, "mo"),
        )
        return Event(user, ts, EventKind.PAGE_VIEW, payload, sid)
    if kind == "m":
        payload = MousePayload(
            _require_int(obj, "scroll"),
            _require_int(obj, "mo"),
            _require_int(obj, "move"),
        )
        return Event(user, ts, EventKind.MOUSE, payload, sid)
    raise ValueError(f"unknown event kind {kind!r}")


def _event_to_obj(event: Event) -> dict:
    obj: dict = {"u": event.user_id, "t": event.timestamp, "k": event.kind.value}
    if event.session_id is not None:
        obj["sid"] = event.session_id
    p = event.payload
    if event.kind is EventKind.QUERY:
        obj["text"] = p.query_text
    elif event.kind is EventKind.CLICK:
        obj["rank"] = p.serp_rank
        obj["url"] = p.url
        if p.query_index is not None:
            obj["qi"] = p.query_index
    elif event.kind is EventKind.PAGE_VIEW:
        obj.update(url=p.url, dwell=p.dwell_ms, scroll=p.scroll_px, mo=p.mouseover_count)
    else:
        obj.update(scroll=p.scroll_px, mo=p.mouseover_count, move=p.move_px)
    return obj


def parse_event_log(stream: IO[bytes]) -> tuple[list[Event], list[LineDiagnostic]]:
    """Parse a v1 event log. Returns events in file order plus per-line diagnostics.

    Malformed lines are skipped and reported; only I/O failures and a bad
    header abort.
    """
    try:
        data = stream.read()
    except OSError as exc:
        raise UnreadableStream(f"cannot read event log: {exc}") from exc
    lines = data.split(b"\n")
    if not lines or lines[0].decode("utf-8", errors="replace").strip() != LOG_HEADER:
        raise HeaderError(f"event log must start with {LOG_HEADER!r}")

    events: list[Event] = []
    diagnostics: list[LineDiagnostic] = []
    for line_no, raw in enumerate(lines[1:], start=2):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw.decode("utf-8"))
            if not isinstance(obj, dict):
                raise ValueError("event record must be a JSON object")
            events.append(_event_from_obj(obj))
        except (ValueError, KeyError, TypeError) as exc:
            diagnostics.append(LineDiagnostic(line_no, str(exc)))
    if diagnostics:
        logger.info("skipped %d malformed line(s) while parsing event log", len(diagnostics))
    return events, diagnostics


def read_event_log(path) -> tuple[list[Event], list[LineDiagnostic]]:
    try:
        with open(path, "rb") as fh:
            return parse_event_log(fh)
    except OSError as exc:
        raise UnreadableStream(f"cannot open {path}: {exc}") from exc


def event_log_text(events: Iterable[Event]) -> str:
    lines = [LOG_HEADER]
    for event in events:
        lines.append(json.dumps(_event_to_obj(event), separators=(",", ":"), ensure_ascii=False))
    return "\n".join(lines) + "\n"


def write_event_log(events: Iterable[Event], stream: IO[bytes]) -> None:
    stream.write(event_log_text(events).encode("utf-8"))


def load_labels(stream: IO[bytes]) -> dict[str, IntentClass]:
    """Parse a v1 label file into session_id -> IntentClass. Strict: any bad line aborts."""
    try:
        data = stream.read()
    except OSError as exc:
        raise UnreadableStream(f"cannot read label file: {exc}") from exc
    text = data.decode("utf-8")
    lines = text.split("\n")
    if not lines or lines[0].strip() != LABELS_HEADER:
        raise HeaderError(f"label file must start with {LABELS_HEADER!r}")
    labels: dict[str, IntentClass] = {}
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 2:
            raise SessionMinerError(f"label line {line_no}: expected session_id<TAB>label")
        sid, name = parts
        label = IntentClass.from_name(name)
        if sid in labels and labels[sid] is not label:
            raise DuplicateConflict(f"label line {line_no}: conflicting labels for {sid!r}")
        labels[sid] = label
    return labels


def read_labels(path) -> dict[str, IntentClass]:
    try:
        with open(path, "rb") as fh:
            return load_labels(fh)
    except OSError as exc:
        raise UnreadableStream(f"cannot open {path}: {exc}") from exc


def labels_text(labels: Mapping[str, IntentClass]) -> str:
    lines = [LABELS_HEADER]
    for sid in labels:
        lines.append(f"{sid}\t{labels[sid].label}")
    return "\n".join(lines) + "\n"


def build_corpus(
    events: Iterable[Event],
    labels: Mapping[str, IntentClass] | None = None,
    policy: str = "by-field",
    gap: GapPolicy | None = None,
) -> Corpus:
    """Group events into validated sessions and attach labels.

    policy "by-field" groups on each event's session_id; "by-gap" groups per
    user by inactivity threshold. Sessions come out sorted by session_id.
    """
    labels = labels or {}
    events = list(events)
    sessions: list[Session] = []
    if policy == "by-field":
        grouped: dict[str, list[Event]] = {}
        for event in events:
            if event.session_id is None:
                raise MissingSessionId("by-field grouping requires every event to carry a sid")
            grouped.setdefault(event.session_id, []).append(event)
        for sid in sorted(grouped):
            group = grouped[sid]
            sessions.append(Session(sid, group[0].user_id, tuple(group), labels.get(sid)))
    elif policy == "by-gap":
        by_user: dict[str, list[Event]] = {}
        for event in events:
            by_user.setdefault(event.user_id, []).append(event)
        for user in sorted(by_user):
            for sess in segment_by_gap(by_user[user], gap or GapPolicy()):
                sessions.append(
                    Session(sess.session_id, sess.user_id, sess.events, labels.get(sess.session_id))
                )
        sessions.sort(key=lambda s: s.session_id)
    else:
        raise ValueError(f"unknown session policy {policy!r}")

    for session in sessions:
        try:
            validate_session(session)
        except SessionMinerError as exc:
            raise type(exc)(f"session {session.session_id!r}: {exc}") from exc

    labeled = sum(1 for s in sessions if s.label is not None)
    coverage = labeled / len(sessions) if sessions else 0.0
    return Corpus(tuple(sessions), coverage)


def corpus_stats(corpus: Corpus) -> dict:
    """Session/label counts, mainly for reports and tests."""
    by_label = {c.label: 0 for c in IntentClass}
    for session in corpus.sessions:
        if session.label is not None:
            by_label[session.label.label] += 1
    return {
        "sessions": len(corpus.sessions),
        "events": sum(len(s.events) for s in corpus.sessions),
        "label_coverage": corpus.label_coverage,
        "labels": by_label,
    }
