from __future__ import annotations

import json
import threading

import pytest

from fpindex.canonical import fingerprint_hash
from fpindex.store import LOG_NAME, StoreError, VisitStore
from fpindex.types import report_from_dict

from .test_analyzer import _report


def test_append_assigns_increasing_ids(tmp_path):
    store = VisitStore(tmp_path)
    r1 = store.append(report_from_dict(_report()))
    r2 = store.append(report_from_dict(_report(kind="refresh", ts=2000)))
    assert (r1.visit_id, r2.visit_id) == (1, 2)
    assert r1.fingerprint == fingerprint_hash(r1.report)
    store.close()


def test_replay_restores_everything(tmp_path):
    store = VisitStore(tmp_path)
    for i in range(5):
        store.append(report_from_dict(_report(token=f"t{i % 2}", ts=1000 + i)))
    before = [v.to_dict() for v in store.all_visits()]
    store.close()

    reopened = VisitStore(tmp_path)
    after = [v.to_dict() for v in reopened.all_visits()]
    assert after == before
    assert len(reopened.visits_for_token("t0")) == 3
    reopened.close()


def test_truncated_final_line_is_dropped(tmp_path):
    store = VisitStore(tmp_path)
    store.append(report_from_dict(_report()))
    store.close()
    log = tmp_path / LOG_NAME
    with log.open("a") as fh:
        fh.write('{"visit_id": 2, "recei')  # torn write, no newline

    reopened = VisitStore(tmp_path)
    assert len(reopened.all_visits()) == 1
    reopened.close()


def test_corrupt_middle_line_is_an_error(tmp_path):
    store = VisitStore(tmp_path)
    store.append(report_from_dict(_report()))
    store.append(report_from_dict(_report(kind="refresh", ts=2000)))
    store.close()
    log = tmp_path / LOG_NAME
    lines = log.read_text().splitlines()
    lines[0] = lines[0][:-10] + "}"
    log.write_text("\n".join(lines) + "\n")
    with pytest.raises(StoreError):
        VisitStore(tmp_path)


def test_tampered_fingerprint_is_detected(tmp_path):
    store = VisitStore(tmp_path)
    store.append(report_from_dict(_report()))
    store.close()
    log = tmp_path / LOG_NAME
    obj = json.loads(log.read_text())
    obj["fingerprint"] = "0" * 64
    log.write_text(json.dumps(obj) + "\n")
    with pytest.raises(StoreError):
        VisitStore(tmp_path)


def test_memory_only_mode_persists_nothing(tmp_path):
    store = VisitStore(tmp_path, retain=False)
    store.append(report_from_dict(_report()))
    assert not (tmp_path / LOG_NAME).exists()
    assert len(store.all_visits()) == 1


def test_concurrent_appends_keep_ids_unique(tmp_path):
    store = VisitStore(tmp_path)
    errors = []

    def work(n: int):
        try:
            for i in range(20):
                store.append(report_from_dict(_report(token=f"t{n}", ts=1000 + i)))
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=work, args=(n,)) for n in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
    ids = [v.visit_id for v in store.all_visits()]
    assert len(ids) == 80
    assert ids == sorted(ids) and len(set(ids)) == 80
    store.close()
