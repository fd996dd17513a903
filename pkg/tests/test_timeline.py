from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fpindex.timeline import (
    CanvasComparison,
    DeviceIdTimeline,
    PersistenceClass,
    assess_persistence,
    classify_persistence,
    compare_canvas,
    load_timeline,
    validate_timeline,
)
from fpindex.types import BrowserProfile, EventKind, NavigationEvent, ValidationError

from .oracles import reference_classify_persistence

BROWSER = BrowserProfile("Test", "1.0", "OS", "1.0")

DIGEST_A = "a" * 64
DIGEST_B = "b" * 64


def make_timeline(*pairs, spacing_ms: int = 60_000, start_ms: int = 0) -> DeviceIdTimeline:
    observations = tuple(
        (NavigationEvent(EventKind[kind.upper()], start_ms + i * spacing_ms), frozenset(ids))
        for i, (kind, ids) in enumerate(pairs)
    )
    return DeviceIdTimeline(observations=observations, browser=BROWSER)


def test_no_ids_anywhere_is_absent():
    timeline = make_timeline(("initial", set()), ("refresh", set()))
    assert classify_persistence(timeline) is PersistenceClass.ABSENT


def test_stable_across_sessions_is_persistent():
    timeline = make_timeline(
        ("initial", {"a"}), ("refresh", {"a"}), ("new_session", {"a"}), ("refresh", {"a"})
    )
    assert classify_persistence(timeline) is PersistenceClass.PERSISTENT
    assert assess_persistence(timeline).sufficient_evidence


def test_changes_only_at_session_boundary_is_per_session():
    timeline = make_timeline(
        ("initial", {"a"}), ("refresh", {"a"}), ("new_session", {"b"}), ("refresh", {"b"})
    )
    assert classify_persistence(timeline) is PersistenceClass.PER_SESSION


def test_change_on_refresh_is_per_visit():
    timeline = make_timeline(("initial", {"a"}), ("refresh", {"b"}))
    assert classify_persistence(timeline) is PersistenceClass.PER_VISIT


def test_revisit_counts_like_refresh():
    timeline = make_timeline(("initial", {"a"}), ("revisit", {"b"}))
    assert classify_persistence(timeline) is PersistenceClass.PER_VISIT


def test_cache_clear_resets_baseline_without_demoting():
    timeline = make_timeline(
        ("initial", {"a"}),
        ("refresh", {"a"}),
        ("cache_clear", {"b"}),
        ("refresh", {"b"}),
        ("new_session", {"b"}),
    )
    assert classify_persistence(timeline) is PersistenceClass.PERSISTENT


def test_change_after_cache_clear_still_demotes():
    timeline = make_timeline(("initial", {"a"}), ("cache_clear", {"b"}), ("refresh", {"c"}))
    assert classify_persistence(timeline) is PersistenceClass.PER_VISIT


def test_multi_id_set_membership_change_counts():
    timeline = make_timeline(("initial", {"a", "b"}), ("refresh", {"a"}))
    assert classify_persistence(timeline) is PersistenceClass.PER_VISIT


def test_single_event_has_insufficient_evidence():
    assessment = assess_persistence(make_timeline(("initial", {"a"})))
    assert assessment.persistence is PersistenceClass.PERSISTENT
    assert not assessment.sufficient_evidence


def test_empty_timeline_is_an_error():
    with pytest.raises(ValidationError):
        classify_persistence(DeviceIdTimeline(observations=(), browser=BROWSER))


def test_first_event_must_be_initial():
    with pytest.raises(ValidationError):
        validate_timeline(make_timeline(("refresh", {"a"})))


def test_decreasing_timestamps_rejected():
    timeline = make_timeline(("initial", {"a"}), ("refresh", {"a"}), spacing_ms=-1)
    with pytest.raises(ValidationError):
        validate_timeline(timeline)


def test_timestamp_translation_does_not_change_class():
    pairs = (("initial", {"a"}), ("refresh", {"a"}), ("new_session", {"b"}))
    base = classify_persistence(make_timeline(*pairs, start_ms=0))
    shifted = classify_persistence(make_timeline(*pairs, start_ms=123_456_789))
    assert base is shifted


def test_same_singleton_set_with_new_session_is_persistent():
    timeline = make_timeline(("initial", {"x"}), ("new_session", {"x"}), ("new_session", {"x"}))
    assert classify_persistence(timeline) is PersistenceClass.PERSISTENT


def _append(timeline: DeviceIdTimeline, kind: EventKind, ids: frozenset) -> DeviceIdTimeline:
    last_ts = timeline.observations[-1][0].timestamp_ms
    return DeviceIdTimeline(
        observations=timeline.observations + ((NavigationEvent(kind, last_ts + 1), ids),),
        browser=timeline.browser,
    )


_kinds = st.sampled_from([EventKind.REFRESH, EventKind.REVISIT, EventKind.NEW_SESSION, EventKind.CACHE_CLEAR])
_idsets = st.frozensets(st.sampled_from(["a", "b", "c"]), max_size=3)


@st.composite
def timelines(draw):
    n = draw(st.integers(min_value=1, max_value=7))
    pairs = [(EventKind.INITIAL, draw(_idsets))]
    for _ in range(n - 1):
        pairs.append((draw(_kinds), draw(_idsets)))
    observations = tuple(
        (NavigationEvent(kind, i * 10), ids) for i, (kind, ids) in enumerate(pairs)
    )
    return DeviceIdTimeline(observations=observations, browser=BROWSER)


@settings(max_examples=400)
@given(timelines())
def test_agrees_with_reference_on_random_timelines(timeline):
    entries = [(event.kind.wire_name, ids) for event, ids in timeline.observations]
    assert classify_persistence(timeline).wire_name == reference_classify_persistence(entries)


@settings(max_examples=200)
@given(timelines())
def test_repeating_the_current_set_never_lowers_the_class(timeline):
    before = classify_persistence(timeline)
    current = timeline.observations[-1][1]
    for kind in (EventKind.REFRESH, EventKind.NEW_SESSION):
        assert classify_persistence(_append(timeline, kind, current)) >= before


@settings(max_examples=200)
@given(timelines(), _idsets)
def test_refresh_with_changed_set_forces_per_visit(timeline, ids):
    current = timeline.observations[-1][1]
    if ids == current:
        ids = ids | {"z"}
    extended = _append(timeline, EventKind.REFRESH, ids)
    assert classify_persistence(extended) is PersistenceClass.PER_VISIT


def test_compare_canvas_same_and_distinct():
    same = CanvasComparison("dev-a", "dev-b", True, DIGEST_A, DIGEST_A)
    distinct = CanvasComparison("dev-a", "dev-b", True, DIGEST_A, DIGEST_B)
    assert compare_canvas(same) is False
    assert compare_canvas(distinct) is True


def test_compare_canvas_rejects_malformed_digest():
    with pytest.raises(ValidationError):
        compare_canvas(CanvasComparison("dev-a", "dev-b", True, "xyz", DIGEST_A))


@pytest.mark.parametrize(
    "name,expected",
    [
        ("chrome-desktop.jsonl", PersistenceClass.PERSISTENT),
        ("firefox-desktop.jsonl", PersistenceClass.PER_SESSION),
        ("edge-desktop.jsonl", PersistenceClass.PER_VISIT),
        ("ie-desktop.jsonl", PersistenceClass.ABSENT),
    ],
)
def test_timeline_fixture_files(fixtures_dir, name, expected):
    timeline = load_timeline(fixtures_dir / "timelines" / name)
    assert classify_persistence(timeline) is expected
