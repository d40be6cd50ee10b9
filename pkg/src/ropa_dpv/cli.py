"""Command-line interface.

Subcommands map one-to-one onto the library's capabilities:

* ``stats``    registry mapping summary, coverage table, self-check report
* ``validate`` Article 30 or per-jurisdiction validation of canonical files
* ``convert``  restrict canonical records to a target template with loss report
* ``export``   RDF export (Turtle or JSON-LD)
* ``query``    cross-record compliance rules
* ``import``   regulator-template CSV to canonical interchange format

Exit codes: 0 on success with no error findings or query hits, 1 when the
run completed but error findings or hits exist, 2 on usage or input errors.
Output is human-readable text by default; ``--json`` switches to a
machine-readable envelope with identical finding/hit content.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .errors import RopaError
from .queries import QueryRule, RuleId, run_query
from .rdf_export import (
    DEFAULT_BASE,
    DEFAULT_ROPAEX_NS,
    records_to_graph,
    serialize_jsonld,
    serialize_turtle,
)
from .registry import Jurisdiction, load_registry
from .template_io import (
    convert,
    default_config,
    import_template,
    parse_canonical,
    write_canonical,
)
from .validation import validate_against_profile, validate_article30

_JURISDICTION_CODES = [j.value for j in Jurisdiction]
_RULE_IDS = [r.value for r in RuleId]


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        self.exit(2, f"ropa: error: {message}\n")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ropa",
        description="Registry, validation, conversion and RDF export for "
        "GDPR Records of Processing Activities.",
    )
    parser.add_argument("--version", action="version", version=f"ropa {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("stats", help="registry mapping summary and self-check")
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("validate", help="validate canonical records")
    p.add_argument("--input", required=True, help="canonical interchange CSV")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument(
        "--article30", action="store_true", help="check Article 30 mandatory concepts"
    )
    mode.add_argument(
        "--profile", choices=_JURISDICTION_CODES, help="check one regulator's template"
    )
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("convert", help="convert records between template shapes")
    p.add_argument("--input", required=True, help="canonical interchange CSV")
    p.add_argument(
        "--from", dest="from_jurisdiction", required=True, choices=_JURISDICTION_CODES
    )
    p.add_argument(
        "--to", dest="to_jurisdiction", required=True, choices=_JURISDICTION_CODES
    )
    p.add_argument("--out", required=True, help="output canonical CSV path")
    p.add_argument("--json", action="store_true", help="machine-readable loss report")

    p = sub.add_parser("export", help="export records as RDF")
    p.add_argument("--input", required=True, help="canonical interchange CSV")
    p.add_argument("--format", required=True, choices=["turtle", "jsonld"])
    p.add_argument("--base", default=DEFAULT_BASE, help="base IRI for record nodes")
    p.add_argument(
        "--ropaex", default=DEFAULT_ROPAEX_NS, help="extension namespace IRI"
    )
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable summary")

    p = sub.add_parser(
        "query",
        help="cross-record compliance queries",
        description="TRANSFER_WITHOUT_SAFEGUARDS and SPECIAL_CATEGORY_WITHOUT_BASIS "
        "are artifact-defined heuristics derived from the registry's "
        "mandatory/optional structure, not statutory tests.",
    )
    p.add_argument("--input", required=True, help="canonical interchange CSV")
    p.add_argument("--rule", required=True, choices=_RULE_IDS)
    p.add_argument("--jurisdiction", choices=_JURISDICTION_CODES)
    p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("import", help="import a regulator-template CSV")
    p.add_argument("--input", required=True, help="template-shaped CSV")
    p.add_argument("--template", required=True, choices=_JURISDICTION_CODES)
    p.add_argument("--out", help="output canonical CSV path (default: stdout)")
    p.add_argument("--json", action="store_true", help="machine-readable summary")

    return parser


def _read_file(path: str) -> bytes:
    with open(path, "rb") as handle:
        return handle.read()


def _write_file(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _emit_json(command: str, results: list) -> None:
    envelope = {
        "tool": "ropa",
        "version": __version__,
        "command": command,
        "results": results,
    }
    print(json.dumps(envelope, indent=2, ensure_ascii=False))


def _print_warnings(warnings: list[str]) -> None:
    for warning in warnings:
        print(f"ropa: warning: {warning}", file=sys.stderr)


def _cmd_stats(args) -> int:
    registry = load_registry()
    summary = registry.mapping_summary()
    coverage = registry.coverage_stats()
    check = registry.self_check()
    if args.json:
        _emit_json(
            "stats",
            [
                {
                    "section": "mapping_summary",
                    "exact": summary.exact,
                    "partial": summary.partial,
                    "complex": summary.complex,
                    "none": summary.none,
                    "total": summary.total,
                    "published_delta": dict(summary.published_delta),
                },
                {
                    "section": "coverage",
                    "entries": [
                        {
                            "concept": s.concept_id,
                            "template_values": s.coverage.template_values,
                            "dpv_values": s.coverage.dpv_values,
                            "sufficient": s.sufficient,
                        }
                        for s in coverage
                    ],
                },
                {"section": "self_check", **check.to_dict()},
            ],
        )
        return 0
    print(f"concepts: {summary.total} (plus the register container row)")
    print("mapping outcomes:")
    for name, count in [
        ("exact", summary.exact),
        ("partial", summary.partial),
        ("complex", summary.complex),
        ("none", summary.none),
    ]:
        delta = summary.published_delta[name]
        suffix = "" if delta == 0 else f"  (published reference {count - delta}, delta {delta:+d})"
        print(f"  {name:<8} {count:>3}{suffix}")
    print("specified field values vs DPV:")
    for s in coverage:
        flag = "sufficient" if s.sufficient else "insufficient"
        print(
            f"  {s.concept_id:<55} {s.coverage.template_values:>3} / "
            f"{s.coverage.dpv_values:<3} {flag}"
        )
    print(check.to_text())
    return 0


def _cmd_validate(args) -> int:
    registry = load_registry()
    records, warnings = parse_canonical(_read_file(args.input), registry)
    _print_warnings(warnings)
    profile = (
        registry.profiles[Jurisdiction(args.profile)] if args.profile else None
    )
    results = []
    any_error = False
    for record in records:
        if profile is None:
            report = validate_article30(record, registry)
        else:
            report = validate_against_profile(record, profile, registry)
        any_error = any_error or not report.compliant
        results.append((record, report))
    if args.json:
        _emit_json(
            "validate",
            [
                {
                    "record_id": record.record_id,
                    "compliant": report.compliant,
                    "findings": [
                        {
                            "concept": f.concept,
                            "severity": f.severity.value,
                            "code": f.code.value,
                            "message": f.message,
                        }
                        for f in report.findings
                    ],
                }
                for record, report in results
            ],
        )
    else:
        for record, report in results:
            status = "COMPLIANT" if report.compliant else "NOT COMPLIANT"
            print(
                f"record {record.record_id}: {status} "
                f"({report.error_count} error(s), {report.warning_count} warning(s))"
            )
            for f in report.findings:
                print(f"  {f.severity.value:<7} {f.code.value:<22} {f.concept}: {f.message}")
    return 1 if any_error else 0


def _cmd_convert(args) -> int:
    registry = load_registry()
    records, warnings = parse_canonical(_read_file(args.input), registry)
    _print_warnings(warnings)
    from_config = default_config(registry, Jurisdiction(args.from_jurisdiction))
    to_config = default_config(registry, Jurisdiction(args.to_jurisdiction))
    converted = []
    results = []
    for record in records:
        new_record, loss = convert(record, from_config, to_config, registry)
        converted.append(new_record)
        results.append((record.record_id, loss))
    _write_file(args.out, write_canonical(converted, registry))
    if args.json:
        _emit_json(
            "convert",
            [
                {
                    "record_id": record_id,
                    "retained_count": loss.retained_count,
                    "lost": [
                        {"concept": cid, "reason": reason.value}
                        for cid, reason in loss.lost
                    ],
                }
                for record_id, loss in results
            ],
        )
    else:
        for record_id, loss in results:
            print(
                f"record {record_id}: retained {loss.retained_count} concept(s), "
                f"lost {len(loss.lost)}"
            )
            for cid, reason in loss.lost:
                print(f"  lost {cid} ({reason.value})")
    return 0


def _cmd_export(args) -> int:
    if args.json and not args.out:
        print("ropa: error: --json requires --out (stdout carries the RDF)", file=sys.stderr)
        return 2
    registry = load_registry()
    records, warnings = parse_canonical(_read_file(args.input), registry)
    _print_warnings(warnings)
    graph = records_to_graph(records, registry, base=args.base, ropaex=args.ropaex)
    text = serialize_turtle(graph) if args.format == "turtle" else serialize_jsonld(graph)
    _write_file(args.out, text)
    if args.json:
        _emit_json(
            "export",
            [
                {
                    "records": len(records),
                    "triples": len(graph),
                    "format": args.format,
                    "output": args.out or "-",
                }
            ],
        )
    return 0


def _cmd_query(args) -> int:
    registry = load_registry()
    records, warnings = parse_canonical(_read_file(args.input), registry)
    _print_warnings(warnings)
    rule = QueryRule(
        RuleId(args.rule),
        Jurisdiction(args.jurisdiction) if args.jurisdiction else None,
    )
    result = run_query(rule, records, registry)
    if args.json:
        _emit_json(
            "query",
            [
                {"rule": result.rule.value, "record_id": record_id, "detail": detail}
                for record_id, detail in result.hits
            ],
        )
    else:
        if not result.hits:
            print(f"{result.rule.value}: no hits")
        for record_id, detail in result.hits:
            print(f"{record_id}: {detail}")
    return 1 if result.hits else 0


def _cmd_import(args) -> int:
    if args.json and not args.out:
        print(
            "ropa: error: --json requires --out (stdout carries the canonical CSV)",
            file=sys.stderr,
        )
        return 2
    registry = load_registry()
    config = default_config(registry, Jurisdiction(args.template))
    records, warnings = import_template(_read_file(args.input), config, registry)
    _print_warnings(warnings)
    _write_file(args.out, write_canonical(records, registry))
    if args.json:
        _emit_json(
            "import",
            [{"records": len(records), "template": args.template, "output": args.out or "-"}],
        )
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "validate": _cmd_validate,
    "convert": _cmd_convert,
    "export": _cmd_export,
    "query": _cmd_query,
    "import": _cmd_import,
}


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except RopaError as exc:
        print(f"ropa: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ropa: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
