"""Seeded synthetic corpus generator.

Profiles encode per-intent behavioral tendencies (query volume, reformulation,
clicking, revisits, breaks, dwell/scroll/mouse intensity). The default numbers
are engineered so that the three intents are statistically separable in the
intent feature space; they validate the pipeline, not any empirical claim.

Class counts are allocated deterministically by largest remainder, and every
session draws from its own generator seeded seed + session_index, so output
files are byte-identical across runs and across worker counts.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .events import (
    Event,
    IntentClass,
    Session,
    click_event,
    mouse_event,
    page_view_event,
    query_event,
)
from .exceptions import InvalidConfig
from .knowledge import KnowledgeRecord, knowledge_text
from .log_io import event_log_text, labels_text
from .parallel import parallel_map

INFORMATIONAL_SHARE = 0.497  # observed share of informational sessions in the 913-session log

_VOCAB_SIZE = 400
_TOPIC_SIZE = 30
_SITE_COUNT = 60


@dataclass(frozen=True)
class BehaviorProfile:
    """Per-intent generator parameters. All probabilities in [0,1], means > 0."""

    queries_per_session: float  # geometric mean
    query_terms: float  # shifted-Poisson mean, >= 1
    reformulation_overlap: float  # chance of keeping each previous-query term
    clicks_per_query: float  # Poisson mean
    revisit_prob: float  # chance a click goes to an already-clicked URL
    url_term_overlap: float  # chance a URL path token comes from the issuing query
    serp_rank_spread: float  # Poisson mean of (rank - 1)
    inter_query_gap_ms: float  # exponential scale
    break_prob: float  # chance of a long pause before the next query
    break_scale_ms: float  # exponential scale of break length on top of the floor
    dwell_scale_ms: float
    scroll_scale_px: float
    mouseover_scale: float
    mouse_events_per_query: float
    move_scale_px: float

    def __post_init__(self):
        for name in ("reformulation_overlap", "revisit_prob", "url_term_overlap", "break_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidConfig(f"{name} must be in [0, 1]")
        for name in ("queries_per_session", "query_terms"):
            if getattr(self, name) < 1.0:
                raise InvalidConfig(f"{name} must be >= 1")
        for f in fields(self):
            if isinstance(getattr(self, f.name), (int, float)) and getattr(self, f.name) < 0:
                raise InvalidConfig(f"{f.name} must be >= 0")


@dataclass(frozen=True)
class KnowledgeProfile:
    pre_mean: float
    pre_sd: float
    gain_mean: float
    gain_sd: float


def default_profiles() -> dict[IntentClass, BehaviorProfile]:
    """Navigational: one short query straight to a matching site. Informational:
    long reformulated query chains with revisits and breaks. Transactional:
    short sessions with several low-overlap clicks."""
    return {
        IntentClass.NAVIGATIONAL: BehaviorProfile(
            queries_per_session=1.1,
            query_terms=2.0,
            reformulation_overlap=0.15,
            clicks_per_query=1.0,
            revisit_prob=0.0,
            url_term_overlap=0.95,
            serp_rank_spread=0.1,
            inter_query_gap_ms=4_000,
            break_prob=0.0,
            break_scale_ms=90_000,
            dwell_scale_ms=8_000,
            scroll_scale_px=250,
            mouseover_scale=1.5,
            mouse_events_per_query=1.0,
            move_scale_px=400,
        ),
        IntentClass.INFORMATIONAL: BehaviorProfile(
            queries_per_session=6.0,
            query_terms=4.5,
            reformulation_overlap=0.65,
            clicks_per_query=2.4,
            revisit_prob=0.4,
            url_term_overlap=0.5,
            serp_rank_spread=2.2,
            inter_query_gap_ms=45_000,
            break_prob=0.4,
            break_scale_ms=150_000,
            dwell_scale_ms=45_000,
            scroll_scale_px=2_600,
            mouseover_scale=8.0,
            mouse_events_per_query=4.0,
            move_scale_px=3_200,
        ),
        IntentClass.TRANSACTIONAL: BehaviorProfile(
            queries_per_session=2.8,
            query_terms=2.8,
            reformulation_overlap=0.25,
            clicks_per_query=3.2,
            revisit_prob=0.05,
            url_term_overlap=0.15,
            serp_rank_spread=0.8,
            inter_query_gap_ms=15_000,
            break_prob=0.0,
            break_scale_ms=90_000,
            dwell_scale_ms=16_000,
            scroll_scale_px=800,
            mouseover_scale=3.5,
            mouse_events_per_query=2.0,
            move_scale_px=1_100,
        ),
    }


def default_knowledge_profiles() -> dict[IntentClass, KnowledgeProfile]:
    """Informational sessions draw gain from a clearly higher distribution."""
    return {
        IntentClass.NAVIGATIONAL: KnowledgeProfile(0.50, 0.15, 0.01, 0.02),
        IntentClass.INFORMATIONAL: KnowledgeProfile(0.40, 0.12, 0.32, 0.09),
        IntentClass.TRANSACTIONAL: KnowledgeProfile(0.50, 0.15, 0.06, 0.03),
    }


@dataclass(frozen=True)
class SynthConfig:
    n_sessions: int = 913
    # class mix in IntentClass order (navigational, informational, transactional)
    class_mix: tuple[float, float, float] = (
        (1.0 - INFORMATIONAL_SHARE) / 2.0,
        INFORMATIONAL_SHARE,
        (1.0 - INFORMATIONAL_SHARE) / 2.0,
    )
    profiles: dict[IntentClass, BehaviorProfile] = field(default_factory=default_profiles)
    knowledge: dict[IntentClass, KnowledgeProfile] = field(default_factory=default_knowledge_profiles)
    seed: int = 0
    n_users: int = 124

    def __post_init__(self):
        if self.n_sessions < 0:
            raise InvalidConfig("n_sessions must be >= 0")
        if self.n_users < 1:
            raise InvalidConfig("n_users must be >= 1")
        if len(self.class_mix) != len(IntentClass):
            raise InvalidConfig("class_mix needs one share per intent class")
        if any(m < 0 for m in self.class_mix):
            raise InvalidConfig("class mix shares must be >= 0")
        if abs(sum(self.class_mix) - 1.0) > 1e-9:
            raise InvalidConfig("class mix must sum to 1")
        for cls in IntentClass:
            if cls not in self.profiles or cls not in self.knowledge:
                raise InvalidConfig(f"missing profile for {cls.label}")


def largest_remainder_counts(n: int, mix: tuple[float, ...]) -> tuple[int, ...]:
    """Deterministic integer allocation; remainder ties go to the lower index."""
    exact = [n * m for m in mix]
    counts = [int(np.floor(e)) for e in exact]
    leftover = n - sum(counts)
    order = sorted(range(len(mix)), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in order[:leftover]:
        counts[i] += 1
    return tuple(counts)


@dataclass(frozen=True)
class SynthCorpus:
    sessions: tuple[Session, ...]
    records: tuple[KnowledgeRecord, ...]

    @property
    def event_log(self) -> str:
        return event_log_text([e for s in self.sessions for e in s.events])

    @property
    def labels(self) -> str:
        return labels_text({s.session_id: s.label for s in self.sessions})

    @property
    def knowledge(self) -> str:
        return knowledge_text(list(self.records))


def _pick_terms(rng, topic, count, exclude=()):
    pool = [t for t in topic if t not in exclude]
    count = min(count, len(pool))
    idx = rng.choice(len(pool), size=count, replace=False)
    return [pool[i] for i in sorted(idx)]


def _make_url(rng, site: int, terms, overlap: float) -> str:
    path = []
    for term in terms[:3]:
        if rng.random() < overlap:
            path.append(term)
    while len(path) < 2:
        path.append(f"p{rng.integers(0, 1000):03d}")
    return f"https://www.site{site:02d}.example/" + "/".join(path)


def generate_session(index: int, cls: IntentClass, cfg: SynthConfig) -> tuple[Session, KnowledgeRecord]:
    """One session from its own generator (seed + index); pure and parallel-safe."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed + index))
    profile = cfg.profiles[cls]
    user = f"u{index % cfg.n_users:03d}"
    sid = f"s{index:05d}"

    topic_ids = rng.choice(_VOCAB_SIZE, size=_TOPIC_SIZE, replace=False)
    topic = [f"w{t:03d}" for t in topic_ids]
    home_site = int(rng.integers(0, _SITE_COUNT))

    t = 1_600_000_000_000 + index * 86_400_000 + int(rng.integers(0, 3_600_000))
    n_queries = int(rng.geometric(1.0 / profile.queries_per_session))
    events: list[Event] = []
    clicked_urls: list[str] = []
    prev_terms: list[str] = []

    for qi in range(n_queries):
        target = max(1, 1 + int(rng.poisson(profile.query_terms - 1.0)))
        if prev_terms:
            kept = [w for w in prev_terms if rng.random() < profile.reformulation_overlap]
        else:
            kept = []
        kept = kept[:target]
        terms = kept + _pick_terms(rng, topic, target - len(kept), exclude=kept)
        events.append(query_event(user, t, " ".join(terms), session_id=sid))
        prev_terms = terms

        n_clicks = int(rng.poisson(profile.clicks_per_query))
        for _ in range(n_clicks):
            t += 800 + int(rng.exponential(2_200))
            if clicked_urls and rng.random() < profile.revisit_prob:
                url = clicked_urls[int(rng.integers(0, len(clicked_urls)))]
            else:
                site = home_site if rng.random() < 0.7 else int(rng.integers(0, _SITE_COUNT))
                url = _make_url(rng, site, terms, profile.url_term_overlap)
            rank = 1 + int(rng.poisson(profile.serp_rank_spread))
            events.append(click_event(user, t, url, serp_rank=rank, query_index=qi, session_id=sid))
            clicked_urls.append(url)
            t += 300 + int(rng.exponential(700))
            dwell = 900 + int(rng.exponential(profile.dwell_scale_ms))
            events.append(
                page_view_event(
                    user,
                    t,
                    url,
                    dwell_ms=dwell,
                    scroll_px=int(rng.exponential(profile.scroll_scale_px)),
                    mouseover_count=int(rng.poisson(profile.mouseover_scale)),
                    session_id=sid,
                )
            )
            t += min(dwell, 25_000)

        for _ in range(int(rng.poisson(profile.mouse_events_per_query))):
            t += 200 + int(rng.exponential(1_500))
            events.append(
                mouse_event(
                    user,
                    t,
                    scroll_px=int(rng.exponential(profile.scroll_scale_px)),
                    mouseover_count=int(rng.poisson(profile.mouseover_scale)),
                    move_px=int(rng.exponential(profile.move_scale_px)),
                    session_id=sid,
                )
            )

        if qi + 1 < n_queries:
            gap = 2_000 + int(rng.exponential(profile.inter_query_gap_ms))
            if rng.random() < profile.break_prob:
                gap += 70_000 + int(rng.exponential(profile.break_scale_ms))
            t += gap

    session = Session(sid, user, tuple(events), label=cls)

    kp = cfg.knowledge[cls]
    pre = float(np.clip(rng.normal(kp.pre_mean, kp.pre_sd), 0.0, 1.0))
    post = float(np.clip(pre + rng.normal(kp.gain_mean, kp.gain_sd), 0.0, 1.0))
    record = KnowledgeRecord(sid, round(pre, 4), round(post, 4))
    return session, record


def generate_corpus(cfg: SynthConfig, jobs: int = 1) -> SynthCorpus:
    """Deterministic corpus: exact class counts, per-session derived seeds."""
    counts = largest_remainder_counts(cfg.n_sessions, cfg.class_mix)
    assignment = np.repeat(np.arange(len(IntentClass)), counts)
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    rng.shuffle(assignment)

    def build(index: int):
        return generate_session(index, IntentClass(int(assignment[index])), cfg)

    results = parallel_map(build, range(cfg.n_sessions), jobs=jobs)
    sessions = tuple(s for s, _ in results)
    records = tuple(r for _, r in results)
    return SynthCorpus(sessions, records)


# ---- config file ---------------------------------------------------------------


def _profile_from_dict(obj: dict, base: BehaviorProfile) -> BehaviorProfile:
    known = {f.name for f in fields(BehaviorProfile)}
    unknown = set(obj) - known
    if unknown:
        raise InvalidConfig(f"unknown profile keys: {sorted(unknown)}")
    return replace(base, **obj)


def config_from_dict(obj: dict) -> SynthConfig:
    """Build a SynthConfig from the documented JSON schema, defaulting everything absent."""
    if not isinstance(obj, dict):
        raise InvalidConfig("config must be a JSON object")
    known = {"n_sessions", "seed", "n_users", "class_mix", "profiles", "knowledge"}
    unknown = set(obj) - known
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")

    profiles = default_profiles()
    for name, overrides in (obj.get("profiles") or {}).items():
        cls = IntentClass.from_name(name)
        profiles[cls] = _profile_from_dict(overrides, profiles[cls])
    knowledge = default_knowledge_profiles()
    for name, overrides in (obj.get("knowledge") or {}).items():
        cls = IntentClass.from_name(name)
        known_kp = {f.name for f in fields(KnowledgeProfile)}
        if set(overrides) - known_kp:
            raise InvalidConfig(f"unknown knowledge keys: {sorted(set(overrides) - known_kp)}")
        knowledge[cls] = replace(knowledge[cls], **overrides)

    mix = obj.get("class_mix")
    if mix is not None:
        try:
            mix = tuple(float(mix[c.label]) for c in IntentClass)
        except (KeyError, TypeError) as exc:
            raise InvalidConfig("class_mix must map every intent label to a share") from exc
    kwargs = dict(profiles=profiles, knowledge=knowledge)
    if mix is not None:
        kwargs["class_mix"] = mix
    for key in ("n_sessions", "seed", "n_users"):
        if key in obj:
            kwargs[key] = int(obj[key])
    return SynthConfig(**kwargs)


def config_from_json(text: str) -> SynthConfig:
    try:
        return config_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise InvalidConfig(f"config is not valid JSON: {exc}") from exc
