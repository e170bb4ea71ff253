import pytest

from session_miner.events import (
    IntentClass,
    Session,
    click_event,
    mouse_event,
    page_view_event,
    query_event,
)


def make_session(session_id="s1", user="u1", events=None, label=None):
    if events is None:
        events = [query_event(user, 0, "paris weather", session_id=session_id)]
    return Session(session_id, user, tuple(events), label=label)


@pytest.fixture
def browsing_session():
    """Two queries, two clicks with page views, one mouse event, one long break."""
    u = "u1"
    events = [
        query_event(u, 0, "paris weather", session_id="s1"),
        click_event(u, 2_000, "https://www.meteo.example/paris/weather", serp_rank=1, query_index=0, session_id="s1"),
        page_view_event(u, 3_000, "https://www.meteo.example/paris/weather", dwell_ms=10_000, scroll_px=300, mouseover_count=2, session_id="s1"),
        mouse_event(u, 5_000, scroll_px=120, mouseover_count=1, move_px=400, session_id="s1"),
        query_event(u, 100_000, "paris weather forecast", session_id="s1"),
        click_event(u, 103_000, "https://www.meteo.example/paris/weather", serp_rank=2, query_index=1, session_id="s1"),
    ]
    return make_session(events=events, label=IntentClass.INFORMATIONAL)
