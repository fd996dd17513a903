from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from fpindex.analyzer import load_registry
from fpindex.server import create_app
from fpindex.store import VisitStore
from fpindex.types import PlatformClass

from .conftest import FIXTURES
from .test_analyzer import _report


@pytest.fixture
def client(tmp_path):
    store = VisitStore(tmp_path)
    app = create_app(store, registry=load_registry(FIXTURES / "devices.json"))
    with TestClient(app) as c:
        yield c
    store.close()


def test_submit_and_read_back(client):
    resp = client.post("/api/v1/report", json=_report(ids=["dev-1"]))
    assert resp.status_code == 200
    body = resp.json()
    assert body["visit_id"] == 1
    assert len(body["fingerprint"]) == 64
    device = next(a for a in body["score"]["assessments"] if a["kind"] == "device_id")
    assert device["rank"] == "high"
    assert "evidence: insufficient" in device["evidence"]

    again = client.get("/api/v1/session/s1/score")
    assert again.status_code == 200
    assert again.json() == body["score"]


def test_edge_like_sequence_returns_low(client):
    client.post("/api/v1/report", json=_report(ids=["a"]))
    resp = client.post("/api/v1/report", json=_report(kind="refresh", ts=2000, ids=["b"]))
    device = next(a for a in resp.json()["score"]["assessments"] if a["kind"] == "device_id")
    assert device["rank"] == "low"


def test_malformed_canvas_hash_names_field(client):
    resp = client.post("/api/v1/report", json=_report(canvas_hash="not-hex"))
    assert resp.status_code == 400
    assert resp.json()["field"] == "canvas_hash"


def test_invalid_json_body_is_a_400(client):
    resp = client.post(
        "/api/v1/report", content=b"{nope", headers={"content-type": "application/json"}
    )
    assert resp.status_code == 400


def test_unknown_session_404(client):
    assert client.get("/api/v1/session/absent/score").status_code == 404


def test_score_follows_latest_submission(client):
    for i, kind in enumerate(["initial", "refresh", "new_session"]):
        resp = client.post("/api/v1/report", json=_report(kind=kind, ts=1000 + i, ids=["x"]))
    assert client.get("/api/v1/session/s1/score").json() == resp.json()["score"]


def test_fingerprint_visit_lookup(client):
    body = _report(ids=["dev"])
    first = client.post("/api/v1/report", json=body).json()
    # identical resubmission without a retry marker creates a second visit
    client.post("/api/v1/report", json=body)
    visits = client.get(f"/api/v1/fingerprint/{first['fingerprint']}/visits").json()
    assert [v["visit_id"] for v in visits] == [1, 2]
    assert client.get(f"/api/v1/fingerprint/{'0' * 64}/visits").json() == []
    assert client.get("/api/v1/fingerprint/zz/visits").status_code == 400


def test_retry_marker_is_idempotent(client):
    body = _report(ids=["dev"])
    first = client.post("/api/v1/report", json=body).json()
    retry = client.post("/api/v1/report", json=body, headers={"X-Client-Retry": "1"}).json()
    assert retry["visit_id"] == first["visit_id"]
    assert retry["score"] == first["score"]
    visits = client.get(f"/api/v1/fingerprint/{first['fingerprint']}/visits").json()
    assert len(visits) == 1


def test_retry_marker_with_different_body_still_appends(client):
    client.post("/api/v1/report", json=_report(ids=["dev"]))
    resp = client.post(
        "/api/v1/report",
        json=_report(kind="refresh", ts=2000, ids=["dev2"]),
        headers={"X-Client-Retry": "1"},
    )
    assert resp.json()["visit_id"] == 2


def test_timestamp_going_backwards_is_rejected(client):
    client.post("/api/v1/report", json=_report(ts=5000))
    resp = client.post("/api/v1/report", json=_report(kind="refresh", ts=4000))
    assert resp.status_code == 400
    assert resp.json()["field"] == "event.timestamp"


def test_rubric_endpoint_serves_both_platforms(client):
    body = client.get("/api/v1/rubric").json()
    assert body["desktop"]["platform"] == "desktop"
    assert body["mobile"]["platform"] == "mobile"
    assert {r["attribute"] for r in body["desktop"]["rules"]} >= {"fonts", "device_id"}


def test_placeholder_page_served_without_bundle(client):
    resp = client.get("/")
    assert resp.status_code == 200
    assert "text/html" in resp.headers["content-type"]


def test_static_dir_is_served(tmp_path):
    static = tmp_path / "dist"
    (static / "assets").mkdir(parents=True)
    (static / "index.html").write_text("<html><body>probe</body></html>")
    (static / "assets" / "main.js").write_text("console.log('hi')")
    store = VisitStore(None, retain=False)
    app = create_app(store, static_dir=static)
    with TestClient(app) as client:
        assert "probe" in client.get("/").text
        assert client.get("/assets/main.js").status_code == 200


def test_mobile_report_uses_mobile_rubric(client):
    body = _report(
        token="m1",
        ua="Mozilla/5.0 (Linux; Android 7.0; F8332 Build/1) AppleWebKit/537.36 "
        "(KHTML, like Gecko) Chrome/56.0.2924.87 Mobile Safari/537.36",
        local_ips=["192.168.1.34"],
    )
    body["platform"] = "mobile"
    resp = client.post("/api/v1/report", json=body).json()
    by_kind = {a["kind"]: a for a in resp["score"]["assessments"]}
    assert by_kind["local_ip"]["rank"] == "medium"
    assert by_kind["user_agent"]["rank"] == "medium"
    assert "fonts" not in by_kind


def test_durability_across_restart(tmp_path):
    store = VisitStore(tmp_path)
    app = create_app(store)
    with TestClient(app) as client:
        client.post("/api/v1/report", json=_report(ids=["a"]))
        resp = client.post("/api/v1/report", json=_report(kind="refresh", ts=2000, ids=["a"]))
        expected = resp.json()["score"]
    store.close()

    reopened = VisitStore(tmp_path)
    app2 = create_app(reopened)
    with TestClient(app2) as client:
        assert client.get("/api/v1/session/s1/score").json() == expected
    reopened.close()
