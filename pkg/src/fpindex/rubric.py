"""Versioned, data-driven ranking rubrics.

A rubric maps (attribute, classifier-output tag) to a rank for one platform
class. Rules live in data rather than code so that alternative rubrics can
be swapped in per run; the shipped defaults encode the reference comparison
tables, and a stricter mobile variant is provided alongside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .types import AttributeKind, PlatformClass, Rank, ValidationError

# Classifier-output tags, per attribute.
FONTS_PRESENT = "present"
FONTS_ABSENT = "absent"
DEVICE_ID_PERSISTENT = "persistent"
DEVICE_ID_PER_SESSION = "per_session"
DEVICE_ID_PER_VISIT = "per_visit"
DEVICE_ID_ABSENT = "absent"
CANVAS_DISTINCT = "distinct_on_similar"
CANVAS_SAME = "same_on_similar"
CANVAS_UNCOMPARED = "uncompared"
CANVAS_UNRENDERED = "unrendered"
WEBGL_HARDWARE = "hardware_revealing"
WEBGL_GENERIC = "generic"
WEBGL_UNAVAILABLE = "unavailable"
UA_PHONE_MODEL = "phone_model"
UA_NO_PHONE_MODEL = "no_phone_model"
LOCAL_IP_PRIVATE_V4 = "private_v4"
LOCAL_IP_PRIVATE_V4_ULA = "private_v4_and_ula"
LOCAL_IP_ULA = "ula"
LOCAL_IP_NONE = "none"

_SHARED_TAGS = {
    AttributeKind.DEVICE_ID: (
        DEVICE_ID_PERSISTENT,
        DEVICE_ID_PER_SESSION,
        DEVICE_ID_PER_VISIT,
        DEVICE_ID_ABSENT,
    ),
    AttributeKind.CANVAS: (CANVAS_DISTINCT, CANVAS_SAME, CANVAS_UNCOMPARED, CANVAS_UNRENDERED),
    AttributeKind.WEBGL_RENDERER: (WEBGL_HARDWARE, WEBGL_GENERIC, WEBGL_UNAVAILABLE),
    AttributeKind.LOCAL_IP: (
        LOCAL_IP_PRIVATE_V4,
        LOCAL_IP_PRIVATE_V4_ULA,
        LOCAL_IP_ULA,
        LOCAL_IP_NONE,
    ),
}

# Attribute rows applicable per platform, in table order. Fonts are never
# ranked on mobile (no Flash there); the user agent is never ranked on
# desktop (it is equally verbose across desktop browsers).
APPLICABLE_KINDS = {
    PlatformClass.DESKTOP: (
        AttributeKind.FONTS,
        AttributeKind.DEVICE_ID,
        AttributeKind.CANVAS,
        AttributeKind.WEBGL_RENDERER,
        AttributeKind.LOCAL_IP,
    ),
    PlatformClass.MOBILE: (
        AttributeKind.USER_AGENT,
        AttributeKind.DEVICE_ID,
        AttributeKind.CANVAS,
        AttributeKind.WEBGL_RENDERER,
        AttributeKind.LOCAL_IP,
    ),
}


def required_tags(platform: PlatformClass) -> dict[AttributeKind, tuple[str, ...]]:
    tags = dict(_SHARED_TAGS)
    if platform is PlatformClass.DESKTOP:
        tags[AttributeKind.FONTS] = (FONTS_PRESENT, FONTS_ABSENT)
    else:
        tags[AttributeKind.USER_AGENT] = (UA_PHONE_MODEL, UA_NO_PHONE_MODEL)
    return tags


@dataclass(frozen=True)
class RankingRubric:
    platform: PlatformClass
    version: str
    rules: dict[tuple[AttributeKind, str], Rank] = field(repr=False)

    def rank(self, kind: AttributeKind, tag: str) -> Rank:
        try:
            return self.rules[(kind, tag)]
        except KeyError:
            raise ValidationError(
                f"rubric {self.version!r} has no rule for ({kind.wire_name}, {tag})",
                field="rubric",
            ) from None

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "platform": self.platform.wire_name,
            "rules": [
                {"attribute": kind.wire_name, "tag": tag, "rank": rank.wire_name}
                for (kind, tag), rank in sorted(self.rules.items())
            ],
        }


def lint_rubric(rubric: RankingRubric) -> None:
    """Check exact rule coverage: one rule per defined (attribute, tag) pair."""
    wanted = {
        (kind, tag)
        for kind, tags in required_tags(rubric.platform).items()
        for tag in tags
    }
    have = set(rubric.rules)
    missing = wanted - have
    extra = have - wanted
    if missing:
        kind, tag = sorted(missing, key=lambda p: (p[0], p[1]))[0]
        raise ValidationError(
            f"rubric {rubric.version!r} missing rule for ({kind.wire_name}, {tag})", field="rubric"
        )
    if extra:
        kind, tag = sorted(extra, key=lambda p: (p[0], p[1]))[0]
        raise ValidationError(
            f"rubric {rubric.version!r} has extraneous rule ({kind.wire_name}, {tag})", field="rubric"
        )


def _build(platform: PlatformClass, version: str, table: dict) -> RankingRubric:
    rules = {
        (kind, tag): rank
        for kind, tag_ranks in table.items()
        for tag, rank in tag_ranks.items()
    }
    rubric = RankingRubric(platform=platform, version=version, rules=rules)
    lint_rubric(rubric)
    return rubric


_DEVICE_ID_RULES = {
    DEVICE_ID_PERSISTENT: Rank.HIGH,
    DEVICE_ID_PER_SESSION: Rank.MEDIUM,
    DEVICE_ID_PER_VISIT: Rank.LOW,
    DEVICE_ID_ABSENT: Rank.NONE,
}
_CANVAS_RULES = {
    CANVAS_DISTINCT: Rank.MEDIUM,
    CANVAS_SAME: Rank.LOW,
    CANVAS_UNCOMPARED: Rank.MEDIUM,
    CANVAS_UNRENDERED: Rank.NONE,
}
_WEBGL_RULES = {
    WEBGL_HARDWARE: Rank.LOW,
    WEBGL_GENERIC: Rank.LOW,
    WEBGL_UNAVAILABLE: Rank.NONE,
}

DEFAULT_DESKTOP = _build(
    PlatformClass.DESKTOP,
    "default-desktop-1",
    {
        AttributeKind.FONTS: {FONTS_PRESENT: Rank.HIGH, FONTS_ABSENT: Rank.NONE},
        AttributeKind.DEVICE_ID: _DEVICE_ID_RULES,
        AttributeKind.CANVAS: _CANVAS_RULES,
        AttributeKind.WEBGL_RENDERER: _WEBGL_RULES,
        AttributeKind.LOCAL_IP: {
            LOCAL_IP_PRIVATE_V4: Rank.LOW,
            LOCAL_IP_PRIVATE_V4_ULA: Rank.MEDIUM,
            LOCAL_IP_ULA: Rank.MEDIUM,
            LOCAL_IP_NONE: Rank.NONE,
        },
    },
)

DEFAULT_MOBILE = _build(
    PlatformClass.MOBILE,
    "default-mobile-1",
    {
        AttributeKind.USER_AGENT: {UA_PHONE_MODEL: Rank.MEDIUM, UA_NO_PHONE_MODEL: Rank.NONE},
        AttributeKind.DEVICE_ID: _DEVICE_ID_RULES,
        AttributeKind.CANVAS: _CANVAS_RULES,
        AttributeKind.WEBGL_RENDERER: _WEBGL_RULES,
        AttributeKind.LOCAL_IP: {
            LOCAL_IP_PRIVATE_V4: Rank.MEDIUM,
            LOCAL_IP_PRIVATE_V4_ULA: Rank.MEDIUM,
            LOCAL_IP_ULA: Rank.MEDIUM,
            LOCAL_IP_NONE: Rank.NONE,
        },
    },
)

# Alternative that only grants Medium when a ULA is exposed; not the default.
STRICT_MOBILE = _build(
    PlatformClass.MOBILE,
    "strict-mobile-1",
    {
        AttributeKind.USER_AGENT: {UA_PHONE_MODEL: Rank.MEDIUM, UA_NO_PHONE_MODEL: Rank.NONE},
        AttributeKind.DEVICE_ID: _DEVICE_ID_RULES,
        AttributeKind.CANVAS: _CANVAS_RULES,
        AttributeKind.WEBGL_RENDERER: _WEBGL_RULES,
        AttributeKind.LOCAL_IP: {
            LOCAL_IP_PRIVATE_V4: Rank.LOW,
            LOCAL_IP_PRIVATE_V4_ULA: Rank.MEDIUM,
            LOCAL_IP_ULA: Rank.MEDIUM,
            LOCAL_IP_NONE: Rank.NONE,
        },
    },
)


def default_rubric(platform: PlatformClass) -> RankingRubric:
    return DEFAULT_DESKTOP if platform is PlatformClass.DESKTOP else DEFAULT_MOBILE


def load_rubric(path: str | Path) -> RankingRubric:
    """Load and lint a rubric JSON file: {version, platform, rules: [...]}."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}", field="rubric") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("rules"), list):
        raise ValidationError(f"{path}: rubric must have a rules array", field="rubric")
    platform = PlatformClass.from_wire(obj.get("platform", ""))
    rules: dict[tuple[AttributeKind, str], Rank] = {}
    for i, rule in enumerate(obj["rules"]):
        if not isinstance(rule, dict):
            raise ValidationError(f"{path}: rule {i} must be an object", field="rubric")
        key = (AttributeKind.from_wire(rule.get("attribute", "")), rule.get("tag", ""))
        if key in rules:
            raise ValidationError(
                f"{path}: duplicate rule for ({key[0].wire_name}, {key[1]})", field="rubric"
            )
        rules[key] = Rank.from_wire(rule.get("rank", ""))
    rubric = RankingRubric(platform=platform, version=str(obj.get("version", path.stem)), rules=rules)
    lint_rubric(rubric)
    return rubric
