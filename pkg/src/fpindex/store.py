"""Append-only visit log with in-memory indexes rebuilt on startup.

One JSON object per line; lines are flushed and fsynced before a submission
is acknowledged, so an acknowledged visit survives a hard kill. A truncated
final line (crash mid-write) is dropped on replay; corruption anywhere else
is an error.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .canonical import fingerprint_hash
from .types import FingerprintReport, ValidationError, report_from_dict, report_to_dict

LOG_NAME = "visits.jsonl"


class StoreError(RuntimeError):
    pass


@dataclass(frozen=True)
class VisitRecord:
    visit_id: int
    received_at: str
    report: FingerprintReport
    fingerprint: str

    def to_dict(self) -> dict:
        return {
            "visit_id": self.visit_id,
            "received_at": self.received_at,
            "fingerprint": self.fingerprint,
            "report": report_to_dict(self.report),
        }


class VisitStore:
    """Serialized writer over an append-only log, with concurrent readers."""

    def __init__(self, data_dir: str | Path | None, retain: bool = True):
        self._lock = threading.Lock()
        self._token_locks: dict[str, threading.Lock] = {}
        self._token_locks_guard = threading.Lock()
        self._visits: list[VisitRecord] = []
        self._by_token: dict[str, list[VisitRecord]] = {}
        self._by_fingerprint: dict[str, list[VisitRecord]] = {}
        self._retain = retain and data_dir is not None
        self._path: Path | None = None
        self._fh = None
        if self._retain:
            data_dir = Path(data_dir)
            data_dir.mkdir(parents=True, exist_ok=True)
            self._path = data_dir / LOG_NAME
            self._replay()
            self._fh = self._path.open("a", encoding="utf-8")

    def _replay(self) -> None:
        if not self._path.exists():
            return
        lines = self._path.read_bytes().split(b"\n")
        # Anything after the final newline is a torn write; ignore it.
        for lineno, raw in enumerate(lines[:-1], start=1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
                record = VisitRecord(
                    visit_id=obj["visit_id"],
                    received_at=obj["received_at"],
                    report=report_from_dict(obj["report"]),
                    fingerprint=obj["fingerprint"],
                )
            except (json.JSONDecodeError, KeyError, ValidationError) as exc:
                raise StoreError(f"{self._path} line {lineno}: {exc}") from None
            if record.fingerprint != fingerprint_hash(record.report):
                raise StoreError(f"{self._path} line {lineno}: fingerprint mismatch")
            if self._visits and record.visit_id <= self._visits[-1].visit_id:
                raise StoreError(f"{self._path} line {lineno}: visit ids not increasing")
            self._index(record)

    def _index(self, record: VisitRecord) -> None:
        self._visits.append(record)
        self._by_token.setdefault(record.report.session_token, []).append(record)
        self._by_fingerprint.setdefault(record.fingerprint, []).append(record)

    def token_lock(self, token: str) -> threading.Lock:
        """Per-session mutual exclusion for submissions."""
        with self._token_locks_guard:
            return self._token_locks.setdefault(token, threading.Lock())

    def append(self, report: FingerprintReport) -> VisitRecord:
        fingerprint = fingerprint_hash(report)
        with self._lock:
            record = VisitRecord(
                visit_id=(self._visits[-1].visit_id + 1) if self._visits else 1,
                received_at=datetime.now(timezone.utc).isoformat(),
                report=report,
                fingerprint=fingerprint,
            )
            if self._fh is not None:
                line = json.dumps(record.to_dict(), separators=(",", ":")) + "\n"
                self._fh.write(line)
                self._fh.flush()
                os.fsync(self._fh.fileno())
            # Indexes update only after a durable write, so a failed write
            # leaves no partial state visible.
            self._index(record)
            return record

    def visits_for_token(self, token: str) -> tuple[VisitRecord, ...]:
        with self._lock:
            return tuple(self._by_token.get(token, ()))

    def visits_for_fingerprint(self, fingerprint: str) -> tuple[VisitRecord, ...]:
        with self._lock:
            return tuple(self._by_fingerprint.get(fingerprint, ()))

    def all_visits(self) -> tuple[VisitRecord, ...]:
        with self._lock:
            return tuple(self._visits)

    def tokens(self) -> tuple[str, ...]:
        with self._lock:
            return tuple(self._by_token)

    def close(self) -> None:
        with self._lock:
            if self._fh is not None:
                self._fh.close()
                self._fh = None
