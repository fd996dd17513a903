"""Deterministic byte encoding of reports and the digest over it.

The layout is length-prefixed and written in fixed schema order, so the
encoding is injective over field values and independent of the key order of
whatever JSON the report arrived in. Absent optionals encode differently
from present-but-empty ones. Byte-exact layout: docs/wire-format.md.
"""

from __future__ import annotations

import hashlib
import struct

from .types import FingerprintReport, ValidationError, validate_report

ENCODING_VERSION = 1

_ABSENT = b"\x00"
_PRESENT = b"\x01"


def _put_str(out: list[bytes], value: str) -> None:
    data = value.encode("utf-8")
    out.append(struct.pack(">I", len(data)))
    out.append(data)


def _put_str_list(out: list[bytes], values: tuple[str, ...]) -> None:
    out.append(struct.pack(">I", len(values)))
    for value in values:
        _put_str(out, value)


def _put_opt_str(out: list[bytes], value: str | None) -> None:
    if value is None:
        out.append(_ABSENT)
    else:
        out.append(_PRESENT)
        _put_str(out, value)


def canonicalize_report(report: FingerprintReport) -> bytes:
    """Serialize a valid report to its canonical byte sequence."""
    validate_report(report)
    out: list[bytes] = [bytes([ENCODING_VERSION])]
    _put_str(out, report.session_token)
    out.append(bytes([int(report.platform)]))
    out.append(bytes([int(report.event.kind)]))
    if report.event.timestamp_ms > 0xFFFFFFFFFFFFFFFF:
        raise ValidationError("event.timestamp does not fit in 64 bits", field="event.timestamp")
    out.append(struct.pack(">Q", report.event.timestamp_ms))
    _put_str(out, report.user_agent)
    _put_str_list(out, report.device_ids)
    _put_opt_str(out, report.canvas_hash)
    _put_opt_str(out, report.webgl_vendor)
    _put_opt_str(out, report.webgl_renderer)
    _put_str_list(out, report.local_ips)
    if report.fonts is None:
        out.append(_ABSENT)
    else:
        out.append(_PRESENT)
        _put_str_list(out, report.fonts)
    _put_opt_str(out, report.device_profile_id)
    return b"".join(out)


def fingerprint_hash(report: FingerprintReport) -> str:
    """SHA-256 over the canonical bytes, as 64 lowercase hex characters."""
    return hashlib.sha256(canonicalize_report(report)).hexdigest()
