"""Device-ID persistence classification and cross-device canvas comparison."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path

from .types import (
    CANVAS_HASH_RE,
    BrowserProfile,
    EventKind,
    NavigationEvent,
    ValidationError,
)


class PersistenceClass(IntEnum):
    """How readily the observed device-ID set regenerates; higher = stickier."""

    ABSENT = 0
    PER_VISIT = 1
    PER_SESSION = 2
    PERSISTENT = 3

    @property
    def wire_name(self) -> str:
        return self.name.lower()


@dataclass(frozen=True)
class DeviceIdTimeline:
    """Ordered (navigation event, observed device-ID set) pairs for one browser."""

    observations: tuple[tuple[NavigationEvent, frozenset[str]], ...]
    browser: BrowserProfile


@dataclass(frozen=True)
class PersistenceAssessment:
    persistence: PersistenceClass
    # False when the timeline is too short to back the classification: the
    # no-change classes need >=2 sessions and >=2 within-session reloads.
    sufficient_evidence: bool


@dataclass(frozen=True)
class CanvasComparison:
    device_a: str
    device_b: str
    similar_hardware: bool
    hash_a: str
    hash_b: str


def validate_timeline(timeline: DeviceIdTimeline) -> None:
    if not timeline.observations:
        raise ValidationError("timeline has no events", field="timeline")
    first_event, _ = timeline.observations[0]
    if first_event.kind is not EventKind.INITIAL:
        raise ValidationError("first timeline event must be initial", field="timeline[0].kind")
    prev_ts = None
    for i, (event, _ids) in enumerate(timeline.observations):
        if i > 0 and event.kind is EventKind.INITIAL:
            raise ValidationError("initial may only start a timeline", field=f"timeline[{i}].kind")
        if prev_ts is not None and event.timestamp_ms < prev_ts:
            raise ValidationError("timestamps must be non-decreasing", field=f"timeline[{i}].timestamp")
        prev_ts = event.timestamp_ms


def classify_persistence(timeline: DeviceIdTimeline) -> PersistenceClass:
    """Classify how persistent the device-ID set is across the timeline.

    Any set change at a refresh/revisit demotes to PER_VISIT; otherwise a
    change at a session boundary gives PER_SESSION; otherwise an unchanged
    non-empty set is PERSISTENT. Cache-clear events reset the comparison
    baseline without counting as a change.
    """
    return assess_persistence(timeline).persistence


def assess_persistence(timeline: DeviceIdTimeline) -> PersistenceAssessment:
    validate_timeline(timeline)
    any_ids = False
    changed_within_session = False
    changed_across_sessions = False
    session_count = 1
    reload_count = 0
    prev_ids: frozenset[str] | None = None
    for event, ids in timeline.observations:
        any_ids = any_ids or bool(ids)
        if event.kind in (EventKind.REFRESH, EventKind.REVISIT):
            reload_count += 1
            if ids != prev_ids:
                changed_within_session = True
        elif event.kind is EventKind.NEW_SESSION:
            session_count += 1
            if ids != prev_ids:
                changed_across_sessions = True
        # INITIAL starts the baseline; CACHE_CLEAR resets it.
        prev_ids = ids

    if changed_within_session:
        return PersistenceAssessment(PersistenceClass.PER_VISIT, True)
    if changed_across_sessions:
        return PersistenceAssessment(PersistenceClass.PER_SESSION, True)
    persistence = PersistenceClass.PERSISTENT if any_ids else PersistenceClass.ABSENT
    sufficient = session_count >= 2 and reload_count >= 2
    return PersistenceAssessment(persistence, sufficient)


def compare_canvas(cmp: CanvasComparison) -> bool:
    """True when the two digests differ."""
    for name, digest in (("hash_a", cmp.hash_a), ("hash_b", cmp.hash_b)):
        if not isinstance(digest, str) or not CANVAS_HASH_RE.match(digest):
            raise ValidationError("canvas digest must be 64 lowercase hex characters", field=name)
    return cmp.hash_a != cmp.hash_b


def load_timeline(path: str | Path) -> DeviceIdTimeline:
    """Read a JSON-lines timeline fixture.

    The first line is a header object {"browser": {...}}; each following
    line is one event: {"kind": ..., "timestamp": ..., "device_ids": [...]}.
    """
    path = Path(path)
    lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not lines:
        raise ValidationError(f"{path}: empty timeline file", field="timeline")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} line 1: {exc}", field="timeline") from None
    browser = BrowserProfile.from_dict(header.get("browser", {}))
    observations = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path} line {lineno}: {exc}", field="timeline") from None
        event = NavigationEvent(
            kind=EventKind.from_wire(obj["kind"]),
            timestamp_ms=obj.get("timestamp", 0),
        )
        observations.append((event, frozenset(obj.get("device_ids", []))))
    timeline = DeviceIdTimeline(observations=tuple(observations), browser=browser)
    validate_timeline(timeline)
    return timeline
