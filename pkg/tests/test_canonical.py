from __future__ import annotations

import hashlib
import json
import random
import subprocess

import pytest

from fpindex.canonical import canonicalize_report, fingerprint_hash
from fpindex.types import report_from_dict

from .oracles import reference_canonical_bytes
from .test_types import make_report

# SHA-256 of the canonical bytes of fixtures/reports/sample-report.json,
# computed with the hand-built byte layout in oracles.py and the sha256sum
# command-line tool (both agree).
SAMPLE_REPORT_DIGEST = "51b1bcf330d54e531958b4b2eebb30612e062150a8616275f41e6edfb1d20fff"


@pytest.fixture
def sample_report_json(fixtures_dir) -> dict:
    return json.loads((fixtures_dir / "reports" / "sample-report.json").read_text())


def test_sample_report_matches_reference_bytes(sample_report_json):
    report = report_from_dict(sample_report_json)
    assert canonicalize_report(report) == reference_canonical_bytes(sample_report_json)


def test_sample_report_digest_frozen(sample_report_json):
    assert fingerprint_hash(report_from_dict(sample_report_json)) == SAMPLE_REPORT_DIGEST


def test_sample_report_digest_via_external_tool(sample_report_json, tmp_path):
    blob = tmp_path / "report.bin"
    blob.write_bytes(canonicalize_report(report_from_dict(sample_report_json)))
    out = subprocess.run(["sha256sum", str(blob)], capture_output=True, text=True, check=True)
    assert out.stdout.split()[0] == SAMPLE_REPORT_DIGEST


def test_key_order_does_not_matter(sample_report_json):
    shuffled_keys = list(sample_report_json)
    random.Random(7).shuffle(shuffled_keys)
    shuffled = {k: sample_report_json[k] for k in shuffled_keys}
    assert fingerprint_hash(report_from_dict(shuffled)) == SAMPLE_REPORT_DIGEST


def test_changed_device_id_changes_digest(sample_report_json):
    changed = dict(sample_report_json)
    changed["device_ids"] = list(changed["device_ids"])
    changed["device_ids"][0] = "f" * 64
    assert fingerprint_hash(report_from_dict(changed)) != SAMPLE_REPORT_DIGEST


def test_absent_and_empty_fonts_have_distinct_digests():
    assert fingerprint_hash(make_report(fonts=None)) != fingerprint_hash(make_report(fonts=()))


def test_list_order_is_significant():
    a = make_report(device_ids=("one", "two"))
    b = make_report(device_ids=("two", "one"))
    assert fingerprint_hash(a) != fingerprint_hash(b)


def test_digest_is_stable_across_calls():
    report = make_report()
    assert fingerprint_hash(report) == fingerprint_hash(report)
    assert fingerprint_hash(report) == hashlib.sha256(canonicalize_report(report)).hexdigest()


def test_no_digest_collisions_across_fixture_corpus(fixtures_dir):
    # distinct reports must never share a digest (equal reports may:
    # reports/edge-desktop-visit.json intentionally duplicates a log row)
    by_digest: dict[str, dict] = {}
    sources = [
        json.loads(line)
        for name in ("desktop.jsonl", "mobile.jsonl")
        for line in (fixtures_dir / name).read_text().splitlines()
    ]
    for name in ("sample-report.json", "edge-desktop-visit.json", "all-absent.json"):
        sources.append(json.loads((fixtures_dir / "reports" / name).read_text()))
    for obj in sources:
        digest = fingerprint_hash(report_from_dict(obj))
        if digest in by_digest:
            assert by_digest[digest] == obj, "distinct fixture reports collided"
        by_digest[digest] = obj
    assert len(by_digest) >= len(sources) - 1
