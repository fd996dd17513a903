"""HTTP ingest service: hosts the probe bundle, takes reports, serves scores."""

from __future__ import annotations

import json
import re
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .analyzer import DeviceRegistry, profile_of, score_session
from .canonical import fingerprint_hash
from .rubric import DEFAULT_DESKTOP, DEFAULT_MOBILE, RankingRubric
from .store import VisitRecord, VisitStore
from .types import PlatformClass, ValidationError, report_from_dict

RETRY_HEADER = "x-client-retry"
_HEX_RE = re.compile(r"^[0-9a-f]{64}$")

_PLACEHOLDER_PAGE = """<!doctype html>
<html>
<head><meta charset="utf-8"><title>fpindex</title></head>
<body>
<h1>fpindex ingest server</h1>
<p>No probe bundle is configured. Build the frontend and point the server at
it with <code>--static-dir</code> (or POST reports to /api/v1/report).</p>
</body>
</html>
"""


def _visit_summary(record: VisitRecord) -> dict:
    return {
        "visit_id": record.visit_id,
        "received_at": record.received_at,
        "session_token": record.report.session_token,
        "platform": record.report.platform.wire_name,
        "event": {
            "kind": record.report.event.kind.wire_name,
            "timestamp": record.report.event.timestamp_ms,
        },
    }


def create_app(
    store: VisitStore,
    desktop_rubric: RankingRubric = DEFAULT_DESKTOP,
    mobile_rubric: RankingRubric = DEFAULT_MOBILE,
    registry: DeviceRegistry | None = None,
    static_dir: str | Path | None = None,
) -> FastAPI:
    registry = registry if registry is not None else DeviceRegistry.empty()
    app = FastAPI(title="fpindex", docs_url=None, redoc_url=None)

    @app.exception_handler(ValidationError)
    async def _validation_error(_request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc), "field": exc.field})

    def _rubric_for(platform: PlatformClass) -> RankingRubric:
        return desktop_rubric if platform is PlatformClass.DESKTOP else mobile_rubric

    def _score_token(token: str):
        session = store.visits_for_token(token)
        reports = [v.report for v in session]
        browser_name = profile_of(reports[0]).browser_name
        pool = [
            v.report
            for v in store.all_visits()
            if v.report.platform is reports[0].platform
            and profile_of(v.report).browser_name == browser_name
        ]
        return score_session(
            reports, _rubric_for(reports[0].platform), registry, canvas_pool=pool
        )

    @app.post("/api/v1/report")
    async def submit_report(request: Request):
        try:
            body = json.loads(await request.body())
        except json.JSONDecodeError:
            raise ValidationError("request body is not valid JSON", field="body") from None
        report = report_from_dict(body)
        with store.token_lock(report.session_token):
            previous = store.visits_for_token(report.session_token)
            if previous and report.event.timestamp_ms < previous[-1].report.event.timestamp_ms:
                raise ValidationError(
                    "event.timestamp is earlier than the session's latest visit",
                    field="event.timestamp",
                )
            if request.headers.get(RETRY_HEADER) and previous:
                if previous[-1].fingerprint == fingerprint_hash(report):
                    record = previous[-1]
                else:
                    record = store.append(report)
            else:
                record = store.append(report)
            score = _score_token(report.session_token)
        return {
            "visit_id": record.visit_id,
            "fingerprint": record.fingerprint,
            "score": score.to_dict(),
        }

    @app.get("/api/v1/session/{token}/score")
    def get_session_score(token: str):
        if not store.visits_for_token(token):
            return JSONResponse(status_code=404, content={"error": "unknown session token"})
        return _score_token(token).to_dict()

    @app.get("/api/v1/fingerprint/{fingerprint}/visits")
    def get_fingerprint_visits(fingerprint: str):
        if not _HEX_RE.match(fingerprint):
            raise ValidationError(
                "fingerprint must be 64 lowercase hex characters", field="fingerprint"
            )
        return [_visit_summary(v) for v in store.visits_for_fingerprint(fingerprint)]

    @app.get("/api/v1/rubric")
    def get_rubric():
        return {"desktop": desktop_rubric.to_dict(), "mobile": mobile_rubric.to_dict()}

    static_path = Path(static_dir) if static_dir else None
    if static_path is not None and static_path.is_dir():
        assets = static_path / "assets"
        if assets.is_dir():
            app.mount("/assets", StaticFiles(directory=assets), name="assets")
        index_file = static_path / "index.html"

        @app.get("/", response_class=HTMLResponse)
        def index():
            return index_file.read_text(encoding="utf-8")

    else:

        @app.get("/", response_class=HTMLResponse)
        def index():
            return _PLACEHOLDER_PAGE

    return app
