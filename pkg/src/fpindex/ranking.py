"""Rank individual attributes, aggregate per-browser scores, suggest fixes."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .ipclass import IpClass
from .rubric import (
    CANVAS_DISTINCT,
    CANVAS_SAME,
    CANVAS_UNCOMPARED,
    CANVAS_UNRENDERED,
    DEVICE_ID_ABSENT,
    DEVICE_ID_PER_SESSION,
    DEVICE_ID_PER_VISIT,
    DEVICE_ID_PERSISTENT,
    FONTS_ABSENT,
    FONTS_PRESENT,
    LOCAL_IP_NONE,
    LOCAL_IP_PRIVATE_V4,
    LOCAL_IP_PRIVATE_V4_ULA,
    LOCAL_IP_ULA,
    UA_NO_PHONE_MODEL,
    UA_PHONE_MODEL,
    WEBGL_GENERIC,
    WEBGL_HARDWARE,
    WEBGL_UNAVAILABLE,
    RankingRubric,
)
from .timeline import PersistenceClass
from .types import (
    AttributeKind,
    BrowserProfile,
    PlatformClass,
    Rank,
    ValidationError,
)

# Renderer strings that merely restate a browser vendor reveal no hardware.
GENERIC_RENDERER_TOKENS = frozenset(
    {"mozilla", "google inc.", "google", "microsoft", "apple", "apple inc.", "opera", "webkit"}
)

NO_COMPARISON_NOTE = "no cross-device comparison"


@dataclass(frozen=True)
class AttributeAssessment:
    kind: AttributeKind
    present: bool
    rank: Rank
    evidence: str = ""

    def __post_init__(self):
        if not self.present and self.rank is not Rank.NONE:
            raise ValidationError(
                f"{self.kind.wire_name}: absent attribute cannot carry rank {self.rank.wire_name}",
                field="rank",
            )

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.wire_name,
            "present": self.present,
            "rank": self.rank.wire_name,
            "evidence": self.evidence,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AttributeAssessment":
        return cls(
            kind=AttributeKind.from_wire(d.get("kind", "")),
            present=bool(d.get("present")),
            rank=Rank.from_wire(d.get("rank", "none")),
            evidence=str(d.get("evidence", "")),
        )


@dataclass(frozen=True)
class FingerprintabilityScore:
    browser: BrowserProfile
    platform: PlatformClass
    assessments: tuple[AttributeAssessment, ...]
    total_attributes: int
    fi_total: int

    def to_dict(self) -> dict:
        return {
            "browser": self.browser.to_dict(),
            "platform": self.platform.wire_name,
            "assessments": [a.to_dict() for a in self.assessments],
            "total_attributes": self.total_attributes,
            "fi_total": self.fi_total,
        }


class MitigationId(Enum):
    DISABLE_CANVAS = "disable_canvas"
    DISABLE_FLASH = "disable_flash"
    DISABLE_WEBRTC = "disable_webrtc"
    ANONYMIZING_ADDONS = "anonymizing_addons"


@dataclass(frozen=True)
class Mitigation:
    id: MitigationId
    applies_to: frozenset[AttributeKind]
    description: str

    @property
    def title(self) -> str:
        return _MITIGATION_TITLES[self.id]


_MITIGATION_TITLES = {
    MitigationId.DISABLE_CANVAS: "Disable the Canvas API",
    MitigationId.DISABLE_FLASH: "Disable Flash",
    MitigationId.DISABLE_WEBRTC: "Disable WebRTC",
    MitigationId.ANONYMIZING_ADDONS: "Install anonymizing add-ons",
}

MITIGATIONS = {
    MitigationId.DISABLE_CANVAS: Mitigation(
        id=MitigationId.DISABLE_CANVAS,
        applies_to=frozenset({AttributeKind.CANVAS}),
        description=(
            "Block canvas read-back (e.g. with a canvas-blocking add-on) so page "
            "scripts cannot hash the rendered image."
        ),
    ),
    MitigationId.DISABLE_FLASH: Mitigation(
        id=MitigationId.DISABLE_FLASH,
        applies_to=frozenset({AttributeKind.FONTS}),
        description=(
            "Disable or remove the Flash plugin to stop enumeration of installed "
            "fonts and their installation order."
        ),
    ),
    MitigationId.DISABLE_WEBRTC: Mitigation(
        id=MitigationId.DISABLE_WEBRTC,
        applies_to=frozenset({AttributeKind.DEVICE_ID, AttributeKind.LOCAL_IP}),
        description=(
            "Turn off WebRTC in the browser settings to stop exposure of media "
            "device IDs and local network addresses."
        ),
    ),
    MitigationId.ANONYMIZING_ADDONS: Mitigation(
        id=MitigationId.ANONYMIZING_ADDONS,
        applies_to=frozenset(AttributeKind),
        description=(
            "Install anonymizing or script-blocking add-ons that reduce or "
            "disguise the attribute surface as a whole."
        ),
    ),
}


def rank_fonts(fonts_present: bool, rubric: RankingRubric) -> Rank:
    if rubric.platform is not PlatformClass.DESKTOP:
        raise ValidationError("fonts not applicable on mobile", field="fonts")
    return rubric.rank(AttributeKind.FONTS, FONTS_PRESENT if fonts_present else FONTS_ABSENT)


_PERSISTENCE_TAGS = {
    PersistenceClass.PERSISTENT: DEVICE_ID_PERSISTENT,
    PersistenceClass.PER_SESSION: DEVICE_ID_PER_SESSION,
    PersistenceClass.PER_VISIT: DEVICE_ID_PER_VISIT,
    PersistenceClass.ABSENT: DEVICE_ID_ABSENT,
}


def rank_device_id(persistence: PersistenceClass, rubric: RankingRubric) -> Rank:
    return rubric.rank(AttributeKind.DEVICE_ID, _PERSISTENCE_TAGS[persistence])


def canvas_tag(rendered: bool, distinct_on_similar_devices: bool | None) -> str:
    if not rendered:
        if distinct_on_similar_devices is not None:
            raise ValidationError(
                "cross-device comparison requires a rendered canvas", field="canvas"
            )
        return CANVAS_UNRENDERED
    if distinct_on_similar_devices is None:
        return CANVAS_UNCOMPARED
    return CANVAS_DISTINCT if distinct_on_similar_devices else CANVAS_SAME


def rank_canvas(
    rendered: bool, distinct_on_similar_devices: bool | None, rubric: RankingRubric
) -> Rank:
    return rubric.rank(AttributeKind.CANVAS, canvas_tag(rendered, distinct_on_similar_devices))


def webgl_tag(renderer: str | None) -> str:
    if renderer is None:
        return WEBGL_UNAVAILABLE
    if renderer.strip().lower() in GENERIC_RENDERER_TOKENS:
        return WEBGL_GENERIC
    return WEBGL_HARDWARE


def rank_webgl(renderer: str | None, rubric: RankingRubric) -> Rank:
    return rubric.rank(AttributeKind.WEBGL_RENDERER, webgl_tag(renderer))


def rank_user_agent(
    profile: BrowserProfile, platform: PlatformClass, rubric: RankingRubric
) -> Rank:
    if platform is PlatformClass.DESKTOP:
        return Rank.NONE
    tag = UA_PHONE_MODEL if profile.phone_model else UA_NO_PHONE_MODEL
    return rubric.rank(AttributeKind.USER_AGENT, tag)


def local_ip_tag(classes: set[IpClass] | frozenset[IpClass]) -> str:
    has_private_v4 = IpClass.PRIVATE_V4 in classes
    has_ula = IpClass.ULA in classes
    if has_private_v4 and has_ula:
        return LOCAL_IP_PRIVATE_V4_ULA
    if has_private_v4:
        return LOCAL_IP_PRIVATE_V4
    if has_ula:
        return LOCAL_IP_ULA
    return LOCAL_IP_NONE


def rank_local_ip(
    classes: set[IpClass] | frozenset[IpClass], platform: PlatformClass, rubric: RankingRubric
) -> Rank:
    if rubric.platform is not platform:
        raise ValidationError("rubric platform does not match", field="platform")
    return rubric.rank(AttributeKind.LOCAL_IP, local_ip_tag(classes))


def score(
    browser: BrowserProfile,
    assessments: list[AttributeAssessment] | tuple[AttributeAssessment, ...],
    platform: PlatformClass,
) -> FingerprintabilityScore:
    """Fold assessments into the additive index; at most one per attribute."""
    seen: set[AttributeKind] = set()
    for assessment in assessments:
        if assessment.kind in seen:
            raise ValidationError(
                f"duplicate assessment for {assessment.kind.wire_name}", field="assessments"
            )
        seen.add(assessment.kind)
    fi_total = sum(int(a.rank) for a in assessments)
    total_attributes = sum(1 for a in assessments if a.rank is not Rank.NONE)
    return FingerprintabilityScore(
        browser=browser,
        platform=platform,
        assessments=tuple(assessments),
        total_attributes=total_attributes,
        fi_total=fi_total,
    )


def suggest_mitigations(
    assessments: list[AttributeAssessment] | tuple[AttributeAssessment, ...],
) -> list[Mitigation]:
    """Map ranked attributes to the four countermeasures worth taking."""
    ranked = {a.kind for a in assessments if a.rank is not Rank.NONE}
    out: list[Mitigation] = []
    if AttributeKind.CANVAS in ranked:
        out.append(MITIGATIONS[MitigationId.DISABLE_CANVAS])
    if AttributeKind.FONTS in ranked:
        out.append(MITIGATIONS[MitigationId.DISABLE_FLASH])
    if ranked & {AttributeKind.DEVICE_ID, AttributeKind.LOCAL_IP}:
        out.append(MITIGATIONS[MitigationId.DISABLE_WEBRTC])
    if ranked:
        out.append(MITIGATIONS[MitigationId.ANONYMIZING_ADDONS])
    return out
