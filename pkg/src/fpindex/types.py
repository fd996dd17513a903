"""Domain types for fingerprint attribute observations.

Everything here is immutable; values can be shared freely across threads.
"""

from __future__ import annotations

import ipaddress
import re
from dataclasses import dataclass
from enum import IntEnum

CANVAS_HASH_RE = re.compile(r"^[0-9a-f]{64}$")

MAX_SESSION_TOKEN_LEN = 128


class ValidationError(ValueError):
    """Invalid input; `field` names the offending field when known."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class AttributeKind(IntEnum):
    """The six observed attribute channels. Tag values are the wire encoding."""

    FONTS = 0
    DEVICE_ID = 1
    CANVAS = 2
    WEBGL_RENDERER = 3
    USER_AGENT = 4
    LOCAL_IP = 5

    @property
    def wire_name(self) -> str:
        return _ATTRIBUTE_WIRE_NAMES[self]

    @property
    def label(self) -> str:
        return _ATTRIBUTE_LABELS[self]

    @classmethod
    def from_wire(cls, name: str) -> "AttributeKind":
        try:
            return _ATTRIBUTE_BY_WIRE[name]
        except KeyError:
            raise ValidationError(f"unknown attribute {name!r}", field="attribute") from None


_ATTRIBUTE_WIRE_NAMES = {
    AttributeKind.FONTS: "fonts",
    AttributeKind.DEVICE_ID: "device_id",
    AttributeKind.CANVAS: "canvas",
    AttributeKind.WEBGL_RENDERER: "webgl_renderer",
    AttributeKind.USER_AGENT: "user_agent",
    AttributeKind.LOCAL_IP: "local_ip",
}
_ATTRIBUTE_BY_WIRE = {v: k for k, v in _ATTRIBUTE_WIRE_NAMES.items()}
_ATTRIBUTE_LABELS = {
    AttributeKind.FONTS: "Fonts",
    AttributeKind.DEVICE_ID: "Device ID",
    AttributeKind.CANVAS: "Canvas",
    AttributeKind.WEBGL_RENDERER: "WebGL Renderer",
    AttributeKind.USER_AGENT: "User Agent",
    AttributeKind.LOCAL_IP: "Local IP",
}


class Rank(IntEnum):
    """Per-attribute contribution to the fingerprintability total."""

    NONE = 0
    LOW = 1
    MEDIUM = 2
    HIGH = 3

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @property
    def cell(self) -> str:
        """Table rendering; NONE renders as a dash."""
        return "-" if self is Rank.NONE else self.name.lower()

    @classmethod
    def from_wire(cls, name: str) -> "Rank":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValidationError(f"unknown rank {name!r}", field="rank") from None


class PlatformClass(IntEnum):
    DESKTOP = 0
    MOBILE = 1

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire(cls, name: str) -> "PlatformClass":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValidationError(f"unknown platform {name!r}", field="platform") from None


class EventKind(IntEnum):
    """What triggered a page load."""

    INITIAL = 0
    REFRESH = 1
    REVISIT = 2
    NEW_SESSION = 3
    CACHE_CLEAR = 4

    @property
    def wire_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_wire(cls, name: str) -> "EventKind":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValidationError(f"unknown event kind {name!r}", field="event.kind") from None


@dataclass(frozen=True)
class NavigationEvent:
    kind: EventKind
    timestamp_ms: int


@dataclass(frozen=True)
class BrowserProfile:
    """Identity extracted from a user-agent string.

    phone_model is only ever populated for mobile platforms.
    """

    browser_name: str
    browser_version: str
    os_name: str
    os_version: str
    phone_model: str | None = None

    def to_dict(self) -> dict:
        d = {
            "browser_name": self.browser_name,
            "browser_version": self.browser_version,
            "os_name": self.os_name,
            "os_version": self.os_version,
        }
        if self.phone_model is not None:
            d["phone_model"] = self.phone_model
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "BrowserProfile":
        return cls(
            browser_name=d.get("browser_name", "unknown"),
            browser_version=d.get("browser_version", "unknown"),
            os_name=d.get("os_name", "unknown"),
            os_version=d.get("os_version", "unknown"),
            phone_model=d.get("phone_model"),
        )


UNKNOWN = "unknown"


@dataclass(frozen=True)
class FingerprintReport:
    """One page-load's raw attribute observations.

    `fonts is None` means the font list was not retrievable; an empty tuple
    means it was retrieved and is empty. The same absent-vs-empty distinction
    does not apply to device_ids/local_ips, which are plain observation lists.
    """

    session_token: str
    platform: PlatformClass
    event: NavigationEvent
    user_agent: str = ""
    device_ids: tuple[str, ...] = ()
    canvas_hash: str | None = None
    webgl_vendor: str | None = None
    webgl_renderer: str | None = None
    local_ips: tuple[str, ...] = ()
    fonts: tuple[str, ...] | None = None
    device_profile_id: str | None = None


# Wire field names, in canonical schema order. The same order is used by the
# length-prefixed byte encoding (see canonical.py and docs/wire-format.md).
REPORT_FIELDS = (
    "session_token",
    "platform",
    "event",
    "user_agent",
    "device_ids",
    "canvas_hash",
    "webgl_vendor",
    "webgl_renderer",
    "local_ips",
    "fonts",
    "device_profile_id",
)


def _require(cond: bool, message: str, field: str) -> None:
    if not cond:
        raise ValidationError(message, field=field)


def validate_report(report: FingerprintReport) -> None:
    """Raise ValidationError naming the first field that breaks an invariant."""
    _require(isinstance(report.session_token, str), "session_token must be a string", "session_token")
    _require(
        1 <= len(report.session_token) <= MAX_SESSION_TOKEN_LEN,
        f"session_token must be 1-{MAX_SESSION_TOKEN_LEN} characters",
        "session_token",
    )
    _require(isinstance(report.platform, PlatformClass), "platform must be desktop or mobile", "platform")
    _require(isinstance(report.event, NavigationEvent), "event is required", "event")
    _require(isinstance(report.event.kind, EventKind), "unknown event kind", "event.kind")
    _require(
        isinstance(report.event.timestamp_ms, int) and not isinstance(report.event.timestamp_ms, bool),
        "event.timestamp must be an integer",
        "event.timestamp",
    )
    _require(report.event.timestamp_ms >= 0, "event.timestamp must be >= 0", "event.timestamp")
    _require(isinstance(report.user_agent, str), "user_agent must be a string", "user_agent")
    for i, dev in enumerate(report.device_ids):
        _require(isinstance(dev, str) and dev != "", "device ids must be non-empty strings", f"device_ids[{i}]")
    if report.canvas_hash is not None:
        _require(
            isinstance(report.canvas_hash, str) and bool(CANVAS_HASH_RE.match(report.canvas_hash)),
            "canvas_hash must be 64 lowercase hex characters",
            "canvas_hash",
        )
    for name in ("webgl_vendor", "webgl_renderer", "device_profile_id"):
        value = getattr(report, name)
        if value is not None:
            _require(isinstance(value, str), f"{name} must be a string", name)
    for i, addr in enumerate(report.local_ips):
        _require(isinstance(addr, str), "addresses must be strings", f"local_ips[{i}]")
        try:
            ipaddress.ip_address(addr)
        except ValueError:
            raise ValidationError(f"{addr!r} is not an IP address", field=f"local_ips[{i}]") from None
    if report.fonts is not None:
        for i, font in enumerate(report.fonts):
            _require(isinstance(font, str), "font names must be strings", f"fonts[{i}]")


def _string_list(value, field: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(x, str) for x in value):
        raise ValidationError(f"{field} must be a list of strings", field=field)
    return tuple(value)


def report_from_dict(d: dict) -> FingerprintReport:
    """Parse and validate a wire/fixture JSON object into a report.

    Absent optionals may be omitted or null. Unknown keys are rejected so
    that probe typos surface as 400s instead of silently dropped data.
    """
    if not isinstance(d, dict):
        raise ValidationError("report body must be a JSON object", field="report")
    unknown = set(d) - set(REPORT_FIELDS)
    if unknown:
        raise ValidationError(f"unknown field {sorted(unknown)[0]!r}", field=sorted(unknown)[0])
    for required in ("session_token", "platform", "event"):
        if d.get(required) is None:
            raise ValidationError(f"{required} is required", field=required)
    if not isinstance(d["platform"], str):
        raise ValidationError("platform must be a string", field="platform")
    platform = PlatformClass.from_wire(d["platform"])
    event_obj = d["event"]
    if not isinstance(event_obj, dict) or not isinstance(event_obj.get("kind"), str):
        raise ValidationError("event must be an object with kind and timestamp", field="event")
    event = NavigationEvent(
        kind=EventKind.from_wire(event_obj["kind"]),
        timestamp_ms=event_obj.get("timestamp", 0),
    )
    fonts = d.get("fonts")
    report = FingerprintReport(
        session_token=d["session_token"],
        platform=platform,
        event=event,
        user_agent=d.get("user_agent", "") if d.get("user_agent") is not None else "",
        device_ids=_string_list(d.get("device_ids", []) or [], "device_ids"),
        canvas_hash=d.get("canvas_hash"),
        webgl_vendor=d.get("webgl_vendor"),
        webgl_renderer=d.get("webgl_renderer"),
        local_ips=_string_list(d.get("local_ips", []) or [], "local_ips"),
        fonts=None if fonts is None else _string_list(fonts, "fonts"),
        device_profile_id=d.get("device_profile_id"),
    )
    validate_report(report)
    return report


def report_to_dict(report: FingerprintReport) -> dict:
    """Wire JSON form; absent optionals are omitted."""
    d = {
        "session_token": report.session_token,
        "platform": report.platform.wire_name,
        "event": {"kind": report.event.kind.wire_name, "timestamp": report.event.timestamp_ms},
        "user_agent": report.user_agent,
        "device_ids": list(report.device_ids),
        "local_ips": list(report.local_ips),
    }
    if report.canvas_hash is not None:
        d["canvas_hash"] = report.canvas_hash
    if report.webgl_vendor is not None:
        d["webgl_vendor"] = report.webgl_vendor
    if report.webgl_renderer is not None:
        d["webgl_renderer"] = report.webgl_renderer
    if report.fonts is not None:
        d["fonts"] = list(report.fonts)
    if report.device_profile_id is not None:
        d["device_profile_id"] = report.device_profile_id
    return d
