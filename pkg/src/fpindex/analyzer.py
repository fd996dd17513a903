"""Turn raw report streams into per-browser fingerprintability scores.

This is the shared pipeline behind both the offline log analyzer and the
ingest server's live session scoring, so the two stay byte-for-byte
equivalent on the same inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .ipclass import IpClass, classify_ip
from .ranking import (
    AttributeAssessment,
    FingerprintabilityScore,
    canvas_tag,
    local_ip_tag,
    rank_canvas,
    rank_device_id,
    rank_fonts,
    rank_local_ip,
    rank_user_agent,
    rank_webgl,
    score,
    webgl_tag,
)
from .rubric import (
    CANVAS_UNCOMPARED,
    CANVAS_UNRENDERED,
    WEBGL_GENERIC,
    WEBGL_UNAVAILABLE,
    RankingRubric,
)
from .timeline import (
    DeviceIdTimeline,
    PersistenceAssessment,
    PersistenceClass,
    assess_persistence,
)
from .types import (
    UNKNOWN,
    AttributeKind,
    BrowserProfile,
    EventKind,
    FingerprintReport,
    NavigationEvent,
    PlatformClass,
    ValidationError,
    report_from_dict,
)
from .useragent import parse_user_agent

INSUFFICIENT_EVIDENCE = "evidence: insufficient"

_PERSISTENCE_NOTES = {
    PersistenceClass.ABSENT: "no device ids observed",
    PersistenceClass.PER_VISIT: "id set changed on refresh or revisit",
    PersistenceClass.PER_SESSION: "id set changed only across sessions",
    PersistenceClass.PERSISTENT: "id set stable across all observed events",
}


@dataclass(frozen=True)
class DeviceRegistry:
    """Known device profiles and which pairs count as similar hardware."""

    profiles: dict[str, dict]
    similar_pairs: frozenset[frozenset[str]]

    def similar(self, profile_a: str, profile_b: str) -> bool:
        return frozenset((profile_a, profile_b)) in self.similar_pairs

    @classmethod
    def empty(cls) -> "DeviceRegistry":
        return cls(profiles={}, similar_pairs=frozenset())


def load_registry(path: str | Path) -> DeviceRegistry:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}", field="registry") from None
    profiles = {p["id"]: p for p in obj.get("profiles", [])}
    pairs = set()
    for pair in obj.get("similar_pairs", []):
        if len(pair) != 2:
            raise ValidationError(f"{path}: similar pairs must have two profiles", field="registry")
        pairs.add(frozenset(pair))
    return DeviceRegistry(profiles=profiles, similar_pairs=frozenset(pairs))


@dataclass(frozen=True)
class ObservationLog:
    path: Path
    declared_platform: PlatformClass
    entries: tuple[FingerprintReport, ...]


def load_log(path: str | Path, declared_platform: PlatformClass) -> ObservationLog:
    """Parse a JSON-lines report log; failures carry the 1-based line number."""
    path = Path(path)
    entries = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                report = report_from_dict(obj)
            except (json.JSONDecodeError, ValidationError) as exc:
                raise ValidationError(f"{path} line {lineno}: {exc}", field=f"line {lineno}") from None
            if report.platform is not declared_platform:
                raise ValidationError(
                    f"{path} line {lineno}: platform {report.platform.wire_name} does not match "
                    f"declared {declared_platform.wire_name}",
                    field=f"line {lineno}",
                )
            entries.append(report)
    return ObservationLog(path=path, declared_platform=declared_platform, entries=tuple(entries))


def profile_of(report: FingerprintReport) -> BrowserProfile:
    if not report.user_agent:
        return BrowserProfile(UNKNOWN, UNKNOWN, UNKNOWN, UNKNOWN)
    return parse_user_agent(report.user_agent, report.platform)


def group_key(report: FingerprintReport) -> tuple[str, str, PlatformClass]:
    profile = profile_of(report)
    major = profile.browser_version.split(".")[0]
    return (profile.browser_name, major, report.platform)


def build_timeline(
    reports: list[FingerprintReport] | tuple[FingerprintReport, ...],
    browser: BrowserProfile,
) -> DeviceIdTimeline:
    """Assemble one session token's visits into a timeline.

    The first visit always opens the timeline as INITIAL whatever the client
    sent; a client-sent INITIAL later on is treated as a session boundary.
    """
    observations = []
    for i, report in enumerate(reports):
        kind = report.event.kind
        if i == 0:
            kind = EventKind.INITIAL
        elif kind is EventKind.INITIAL:
            kind = EventKind.NEW_SESSION
        event = NavigationEvent(kind=kind, timestamp_ms=report.event.timestamp_ms)
        observations.append((event, frozenset(report.device_ids)))
    return DeviceIdTimeline(observations=tuple(observations), browser=browser)


def canvas_distinct_on_similar(
    reports: list[FingerprintReport] | tuple[FingerprintReport, ...],
    registry: DeviceRegistry,
) -> bool | None:
    """Compare first-seen canvas hashes across similar device profiles.

    Returns None when no similar pair is covered by the reports. Reports
    lacking a canvas hash or a device profile cannot take part.
    """
    first_hash: dict[str, str] = {}
    for report in reports:
        if report.canvas_hash and report.device_profile_id:
            first_hash.setdefault(report.device_profile_id, report.canvas_hash)
    compared = False
    for pair in registry.similar_pairs:
        ids = sorted(pair)
        if all(p in first_hash for p in ids):
            compared = True
            if first_hash[ids[0]] != first_hash[ids[1]]:
                return True
    return False if compared else None


@dataclass(frozen=True)
class SessionObservations:
    """Attribute evidence pooled over a group of reports."""

    browser: BrowserProfile
    platform: PlatformClass
    persistence: PersistenceAssessment
    fonts_present: bool
    canvas_rendered: bool
    canvas_distinct: bool | None
    webgl_renderer: str | None
    # On mobile: the parsed profile that exposed a phone model, if any did.
    model_profile: BrowserProfile
    ip_classes: frozenset[IpClass]


def _pool_attributes(
    session_reports: list[FingerprintReport] | tuple[FingerprintReport, ...],
    canvas_pool: list[FingerprintReport] | tuple[FingerprintReport, ...],
    registry: DeviceRegistry,
    persistence: PersistenceAssessment,
) -> SessionObservations:
    first = session_reports[0]
    browser = profile_of(first)
    fonts_present = any(r.fonts is not None for r in session_reports)
    canvas_rendered = any(r.canvas_hash for r in session_reports)
    canvas_distinct = (
        canvas_distinct_on_similar(canvas_pool, registry) if canvas_rendered else None
    )
    webgl_renderer = next(
        (r.webgl_renderer for r in session_reports if r.webgl_renderer is not None), None
    )
    model_profile = browser
    if first.platform is PlatformClass.MOBILE:
        model_profile = next(
            (p for p in map(profile_of, session_reports) if p.phone_model), browser
        )
    classes = frozenset(
        classify_ip(addr) for r in session_reports for addr in r.local_ips
    )
    return SessionObservations(
        browser=browser,
        platform=first.platform,
        persistence=persistence,
        fonts_present=fonts_present,
        canvas_rendered=canvas_rendered,
        canvas_distinct=canvas_distinct,
        webgl_renderer=webgl_renderer,
        model_profile=model_profile,
        ip_classes=classes,
    )


def _device_id_evidence(assessment: PersistenceAssessment) -> str:
    note = _PERSISTENCE_NOTES[assessment.persistence]
    if not assessment.sufficient_evidence:
        note = f"{note}; {INSUFFICIENT_EVIDENCE}"
    return note


def _assessments(obs: SessionObservations, rubric: RankingRubric) -> list[AttributeAssessment]:
    out = []
    if obs.platform is PlatformClass.DESKTOP:
        rank = rank_fonts(obs.fonts_present, rubric)
        out.append(
            AttributeAssessment(
                kind=AttributeKind.FONTS,
                present=obs.fonts_present,
                rank=rank,
                evidence="font list retrieved" if obs.fonts_present else "font list not retrievable",
            )
        )
    else:
        model = obs.model_profile.phone_model
        out.append(
            AttributeAssessment(
                kind=AttributeKind.USER_AGENT,
                present=model is not None,
                rank=rank_user_agent(obs.model_profile, obs.platform, rubric),
                evidence=(
                    f"phone model {model!r} in user agent"
                    if model
                    else "no phone model in user agent"
                ),
            )
        )

    device_rank = rank_device_id(obs.persistence.persistence, rubric)
    out.append(
        AttributeAssessment(
            kind=AttributeKind.DEVICE_ID,
            present=obs.persistence.persistence is not PersistenceClass.ABSENT,
            rank=device_rank,
            evidence=_device_id_evidence(obs.persistence),
        )
    )

    tag = canvas_tag(obs.canvas_rendered, obs.canvas_distinct)
    canvas_notes = {
        CANVAS_UNRENDERED: "canvas not rendered",
        CANVAS_UNCOMPARED: "no cross-device comparison",
    }
    canvas_note = canvas_notes.get(
        tag,
        "distinct hashes on similar devices" if obs.canvas_distinct else "same hash on similar devices",
    )
    out.append(
        AttributeAssessment(
            kind=AttributeKind.CANVAS,
            present=obs.canvas_rendered,
            rank=rank_canvas(obs.canvas_rendered, obs.canvas_distinct, rubric),
            evidence=canvas_note,
        )
    )

    gl_tag = webgl_tag(obs.webgl_renderer)
    if gl_tag == WEBGL_UNAVAILABLE:
        gl_note = "renderer not available"
    elif gl_tag == WEBGL_GENERIC:
        gl_note = f"generic renderer {obs.webgl_renderer!r}"
    else:
        gl_note = f"renderer {obs.webgl_renderer!r}"
    out.append(
        AttributeAssessment(
            kind=AttributeKind.WEBGL_RENDERER,
            present=obs.webgl_renderer is not None,
            rank=rank_webgl(obs.webgl_renderer, rubric),
            evidence=gl_note,
        )
    )

    ip_rank = rank_local_ip(obs.ip_classes, obs.platform, rubric)
    revealed = sorted(c.value for c in obs.ip_classes & {IpClass.PRIVATE_V4, IpClass.ULA})
    out.append(
        AttributeAssessment(
            kind=AttributeKind.LOCAL_IP,
            present=bool(revealed),
            rank=ip_rank,
            evidence=("revealed: " + ", ".join(revealed)) if revealed else "no local addresses revealed",
        )
    )
    return out


def score_session(
    session_reports: list[FingerprintReport] | tuple[FingerprintReport, ...],
    rubric: RankingRubric,
    registry: DeviceRegistry,
    canvas_pool: list[FingerprintReport] | tuple[FingerprintReport, ...] | None = None,
) -> FingerprintabilityScore:
    """Score one session token's visit sequence.

    canvas_pool widens the cross-device canvas comparison to reports beyond
    this session (the server passes every stored report for the same browser
    name); it defaults to the session's own reports.
    """
    if not session_reports:
        raise ValidationError("no reports in session", field="session")
    browser = profile_of(session_reports[0])
    timeline = build_timeline(session_reports, browser)
    persistence = assess_persistence(timeline)
    obs = _pool_attributes(
        session_reports, canvas_pool if canvas_pool is not None else session_reports,
        registry, persistence,
    )
    return score(obs.browser, _assessments(obs, rubric), obs.platform)


def _aggregate_persistence(
    token_reports: list[list[FingerprintReport]], browser: BrowserProfile
) -> PersistenceAssessment:
    """Weakest non-absent persistence over the browser's session timelines."""
    assessments = [
        assess_persistence(build_timeline(reports, browser)) for reports in token_reports
    ]
    non_absent = [a for a in assessments if a.persistence is not PersistenceClass.ABSENT]
    if not non_absent:
        return max(assessments, key=lambda a: a.sufficient_evidence)
    weakest = min(a.persistence for a in non_absent)
    return next(a for a in non_absent if a.persistence is weakest)


def analyze(log: ObservationLog, rubric: RankingRubric, registry: DeviceRegistry) -> list[FingerprintabilityScore]:
    """Score every browser in the log, in first-appearance order."""
    if rubric.platform is not log.declared_platform:
        raise ValidationError(
            f"rubric is for {rubric.platform.wire_name}, log declared {log.declared_platform.wire_name}",
            field="rubric",
        )
    groups: dict[tuple, list[FingerprintReport]] = {}
    for report in log.entries:
        groups.setdefault(group_key(report), []).append(report)
    scores = []
    for reports in groups.values():
        tokens: dict[str, list[FingerprintReport]] = {}
        for report in reports:
            tokens.setdefault(report.session_token, []).append(report)
        token_reports = list(tokens.values())
        browser = profile_of(reports[0])
        if len(token_reports) == 1:
            scores.append(score_session(token_reports[0], rubric, registry, canvas_pool=reports))
            continue
        persistence = _aggregate_persistence(token_reports, browser)
        obs = _pool_attributes(reports, reports, registry, persistence)
        scores.append(score(obs.browser, _assessments(obs, rubric), obs.platform))
    return scores
