"""Command-line entry point: offline analysis, table reproduction, serving."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analyzer import DeviceRegistry, analyze, load_log, load_registry, score_session
from .ranking import suggest_mitigations
from .rubric import default_rubric, load_rubric
from .store import StoreError, VisitStore
from .tables import compare_browsers, render_csv, render_text
from .types import PlatformClass, ValidationError, report_from_dict

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2

DESKTOP_LOG = "desktop.jsonl"
MOBILE_LOG = "mobile.jsonl"
REGISTRY_FILE = "devices.json"

DESKTOP_TITLE = "Desktop browser fingerprintability"
MOBILE_TITLE = "Mobile browser fingerprintability"


def _registry_near(log_path: Path, override: str | None) -> DeviceRegistry:
    if override:
        return load_registry(override)
    candidate = log_path.parent / REGISTRY_FILE
    if candidate.exists():
        return load_registry(candidate)
    return DeviceRegistry.empty()


def _cmd_analyze(args) -> int:
    platform = PlatformClass.from_wire(args.platform)
    rubric = load_rubric(args.rubric) if args.rubric else default_rubric(platform)
    log_path = Path(args.log)
    if not log_path.exists():
        print(f"error: no such file: {log_path}", file=sys.stderr)
        return EXIT_IO
    log = load_log(log_path, platform)
    registry = _registry_near(log_path, args.registry)
    scores = analyze(log, rubric, registry)
    if args.format == "json":
        print(json.dumps([s.to_dict() for s in scores], indent=2))
    elif not scores:
        print("no reports in log")
    elif args.format == "csv":
        print(render_csv(compare_browsers(scores)), end="")
    else:
        print(render_text(compare_browsers(scores)), end="")
    return EXIT_OK


def _titled(title: str, body: str) -> str:
    return f"{title}\n{'=' * len(title)}\n\n{body}"


def _cmd_tables(args) -> int:
    fixtures = Path(args.fixtures)
    for name in (DESKTOP_LOG, MOBILE_LOG):
        if not (fixtures / name).exists():
            print(f"error: missing fixture file: {fixtures / name}", file=sys.stderr)
            return EXIT_IO
    registry_path = fixtures / REGISTRY_FILE
    registry = load_registry(registry_path) if registry_path.exists() else DeviceRegistry.empty()
    sections = []
    for name, platform, title in (
        (DESKTOP_LOG, PlatformClass.DESKTOP, DESKTOP_TITLE),
        (MOBILE_LOG, PlatformClass.MOBILE, MOBILE_TITLE),
    ):
        log = load_log(fixtures / name, platform)
        table = compare_browsers(analyze(log, default_rubric(platform), registry))
        body = render_csv(table) if args.format == "csv" else render_text(table)
        sections.append(_titled(title, body))
    print("\n".join(sections), end="")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    host, _, port = args.addr.rpartition(":")
    if not host or not port.isdigit():
        print(f"error: --addr must be host:port, got {args.addr!r}", file=sys.stderr)
        return EXIT_VALIDATION
    data_dir = args.data_dir or os.environ.get("FP_DATA_DIR") or "./fpindex-data"
    desktop = load_rubric(args.rubric_desktop) if args.rubric_desktop else default_rubric(PlatformClass.DESKTOP)
    mobile = load_rubric(args.rubric_mobile) if args.rubric_mobile else default_rubric(PlatformClass.MOBILE)
    registry = load_registry(args.registry) if args.registry else DeviceRegistry.empty()
    store = VisitStore(data_dir if args.retain else None, retain=args.retain)
    app = create_app(
        store,
        desktop_rubric=desktop,
        mobile_rubric=mobile,
        registry=registry,
        static_dir=args.static_dir,
    )
    uvicorn.run(app, host=host, port=int(port), log_level="warning")
    return EXIT_OK


def _cmd_mitigate(args) -> int:
    path = Path(args.file)
    if not path.exists():
        print(f"error: no such file: {path}", file=sys.stderr)
        return EXIT_IO
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}", field="file") from None
    if isinstance(obj, list) or (isinstance(obj, dict) and "assessments" in obj and "session_token" not in obj):
        items = obj if isinstance(obj, list) else obj["assessments"]
        from .ranking import AttributeAssessment

        assessments = [AttributeAssessment.from_dict(item) for item in items]
    else:
        report = report_from_dict(obj)
        registry = _registry_near(path, None)
        result = score_session([report], default_rubric(report.platform), registry)
        assessments = list(result.assessments)
    mitigations = suggest_mitigations(assessments)
    if not mitigations:
        print("no mitigations needed")
        return EXIT_OK
    for m in mitigations:
        print(f"{m.title}: {m.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpindex",
        description="Measure and compare browser fingerprintability.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_analyze = sub.add_parser("analyze", help="score a JSON-lines report log per browser")
    p_analyze.add_argument("log", help="path to the report log (one JSON report per line)")
    p_analyze.add_argument("--platform", required=True, choices=["desktop", "mobile"])
    p_analyze.add_argument("--rubric", help="rubric JSON file (default: built-in)")
    p_analyze.add_argument("--registry", help="device registry JSON (default: devices.json next to the log)")
    p_analyze.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_analyze.set_defaults(func=_cmd_analyze)

    p_tables = sub.add_parser("tables", help="reproduce the desktop and mobile comparison tables")
    p_tables.add_argument("--fixtures", required=True, help="directory with desktop.jsonl and mobile.jsonl")
    p_tables.add_argument("--format", choices=["text", "csv"], default="text")
    p_tables.set_defaults(func=_cmd_tables)

    p_serve = sub.add_parser("serve", help="run the ingest server")
    p_serve.add_argument("--addr", default="127.0.0.1:8080", help="bind address (host:port)")
    p_serve.add_argument("--data-dir", help="visit log directory (env FP_DATA_DIR)")
    retain = p_serve.add_mutually_exclusive_group()
    retain.add_argument("--retain", dest="retain", action="store_true", default=True)
    retain.add_argument("--no-retain", dest="retain", action="store_false",
                        help="keep visits in memory only")
    p_serve.add_argument("--static-dir", help="probe bundle directory served at /")
    p_serve.add_argument("--rubric-desktop", help="desktop rubric JSON override")
    p_serve.add_argument("--rubric-mobile", help="mobile rubric JSON override")
    p_serve.add_argument("--registry", help="device registry JSON for canvas pairing")
    p_serve.set_defaults(func=_cmd_serve)

    p_mitigate = sub.add_parser("mitigate", help="suggest countermeasures for a report or assessment list")
    p_mitigate.add_argument("file", help="report JSON or assessment-list JSON")
    p_mitigate.set_defaults(func=_cmd_mitigate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except StoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
