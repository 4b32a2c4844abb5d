"""Command-line front end: batch checking, ad-hoc queries, competency
questions, fixture management and the HTTP service.

Exit codes: 0 = compliant/success, 1 = violations found, 2 = usage or
parse error. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .corpus import (
    CONTRACT_FIXTURES,
    FIXTURE_NAMES,
    UnknownFixtureError,
    fixture_source,
    load_fixture,
)
from .engine import Session
from .rules import UnknownRuleError, render_report, term_text
from .sparql import Solution, evaluate, parse_query
from .turtle import ParseError, serialize_turtle
from .vocab import default_prefixes, schema_graph

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2


def _split_csv(value: str | None) -> list[str]:
    if not value:
        return []
    return [part.strip() for part in value.split(",") if part.strip()]


def _gather_sources(files: list[str], fixtures: str | None) -> list[tuple[str, str]]:
    """(label, turtle text) pairs from fixture names and file paths."""
    sources: list[tuple[str, str]] = []
    names = _split_csv(fixtures)
    if names == ["all"]:
        names = list(CONTRACT_FIXTURES)
    for name in names:
        sources.append((name, fixture_source(name)))
    for path in files:
        sources.append((path, Path(path).read_text(encoding="utf-8")))
    return sources


def _load_session(files: list[str], fixtures: str | None) -> tuple[Session, str]:
    sources = _gather_sources(files, fixtures)
    graph_id = ",".join(label for label, _ in sources) or "empty"
    session = Session()
    try:
        session.load_contracts([text for _, text in sources], graph_id)
    except ParseError as exc:
        if exc.source_index is not None:
            exc.source_label = sources[exc.source_index][0]
        raise
    return session, graph_id


def _print_error(exc: Exception) -> None:
    label = getattr(exc, "source_label", None)
    prefix = f"error in {label}: " if label else "error: "
    print(prefix + str(exc), file=sys.stderr)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        session, graph_id = _load_session(args.files, args.fixtures)
        rule_ids = None if args.rules in (None, "all") else _split_csv(args.rules)
        report = session.run_check(graph_id, rule_ids, infer=args.infer)
    except (ParseError, UnknownRuleError, UnknownFixtureError, OSError) as exc:
        _print_error(exc)
        return EXIT_ERROR
    sys.stdout.write(render_report(report, args.format))
    return EXIT_VIOLATIONS if report.overall_status == "violated" else EXIT_OK


def _solutions_json(solutions: list[Solution]) -> str:
    rows = [{v: term_text(t) for v, t in s.bindings} for s in solutions]
    return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"


def cmd_query(args: argparse.Namespace) -> int:
    try:
        sources = _gather_sources(args.files, args.fixtures)
        query_text = Path(args.query).read_text(encoding="utf-8")
        query = parse_query(query_text)
        session = Session()
        graph_id = ",".join(label for label, _ in sources) or "empty"
        session.load_contracts((text for _, text in sources), graph_id)
        solutions = sorted(evaluate(session.graph(graph_id), query),
                           key=Solution.sort_key)
    except (ParseError, UnknownFixtureError, OSError) as exc:
        _print_error(exc)
        return EXIT_ERROR
    sys.stdout.write(_solutions_json(solutions))
    return EXIT_OK


def cmd_cq(args: argparse.Namespace) -> int:
    try:
        session, graph_id = _load_session(args.files, args.fixtures)
        cq_ids = [f"CQ-{n}" for n in range(1, 13)]
        report = session.run_check(graph_id, cq_ids)
    except (ParseError, UnknownFixtureError, OSError) as exc:
        _print_error(exc)
        return EXIT_ERROR
    verdict_violations = 0
    for result in report.results:
        rule = result.rule
        print(f"{rule.id}: {rule.label}")
        if rule.alias_of is None:
            if not result.answers:
                print("    (no answers)")
            for s in result.answers:
                row = ", ".join(f"?{v}={term_text(t)}" for v, t in s.bindings)
                print(f"    {row}")
        else:
            if result.answers:
                verdict_violations += len(result.answers)
                print(f"    VIOLATED ({len(result.answers)}):")
                for s in result.answers:
                    row = ", ".join(f"?{v}={term_text(t)}" for v, t in s.bindings)
                    print(f"        {row}")
            else:
                print("    compliant")
    return EXIT_VIOLATIONS if verdict_violations else EXIT_OK


def cmd_fixtures(args: argparse.Namespace) -> int:
    try:
        if args.action == "list":
            for name in FIXTURE_NAMES:
                print(f"{name}  ({len(load_fixture(name))} triples)")
            return EXIT_OK
        if args.action == "cat":
            if not args.names:
                print("error: 'cat' needs a fixture name", file=sys.stderr)
                return EXIT_ERROR
            for name in args.names:
                sys.stdout.write(fixture_source(name))
            return EXIT_OK
        # export
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        names = args.names or list(FIXTURE_NAMES)
        for name in names:
            (out / f"{name}.ttl").write_text(fixture_source(name),
                                             encoding="utf-8")
        schema_ttl = serialize_turtle(schema_graph(), default_prefixes())
        (out / "daont-schema.ttl").write_text(schema_ttl, encoding="utf-8")
        print(f"wrote {len(names)} fixtures + daont-schema.ttl to {out}")
        return EXIT_OK
    except (UnknownFixtureError, OSError) as exc:
        _print_error(exc)
        return EXIT_ERROR


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(check_interval=args.check_interval,
                     dashboard_dir=args.dashboard)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daont-verify",
        description="Closed-world compliance checks for EU Data Act contracts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_inputs(p: argparse.ArgumentParser) -> None:
        p.add_argument("files", nargs="*", help="Turtle contract files")
        p.add_argument("--fixtures",
                       help="comma-separated fixture names, or 'all' for the "
                            "six contract scenarios")

    p_check = sub.add_parser("check", help="run compliance rules")
    add_inputs(p_check)
    p_check.add_argument("--rules", default="all",
                         help="comma-separated rule ids (default: all)")
    p_check.add_argument("--infer", action="store_true",
                         help="apply RDFS subclass/subproperty closure first")
    p_check.add_argument("--format", choices=("text", "json"), default="text")
    p_check.set_defaults(func=cmd_check)

    p_query = sub.add_parser("query", help="run a SPARQL-subset query")
    add_inputs(p_query)
    p_query.add_argument("--query", required=True, help="query file (.rq)")
    p_query.set_defaults(func=cmd_query)

    p_cq = sub.add_parser("cq", help="answer the competency questions")
    add_inputs(p_cq)
    p_cq.set_defaults(func=cmd_cq)

    p_fix = sub.add_parser("fixtures", help="list, print or export fixtures")
    p_fix.add_argument("action", choices=("list", "cat", "export"))
    p_fix.add_argument("names", nargs="*", help="fixture names")
    p_fix.add_argument("--out", default="fixtures-out",
                       help="target directory for 'export'")
    p_fix.set_defaults(func=cmd_fixtures)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int,
                         default=int(os.environ.get("DAONT_PORT", "8765")))
    p_serve.add_argument("--check-interval", type=float, default=None,
                         help="seconds between periodic background sweeps")
    p_serve.add_argument("--dashboard", default=None,
                         help="directory of built dashboard assets to serve at /")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
