"""HTTP API over the engine: graph management, compliance checks, queries
and what-if fact edits, for the dashboard and programmatic clients.

All error bodies carry a machine code and a human message:
{"code": "parse_error" | "unknown_graph" | "unknown_rule" |
 "unsupported_query" | "graph_exists" | "bad_request", "message": ...}
Turtle travels as text/turtle, everything else as JSON. The check endpoint
body is byte-identical to the report renderer's JSON output.

No authentication; the service is a prototype meant to bind to loopback.
An optional periodic sweep re-checks every graph on an interval and keeps
the recent reports in a per-graph ring buffer.
"""

from __future__ import annotations

import itertools
import threading
from collections import deque
from contextlib import asynccontextmanager
from pathlib import Path

from fastapi import FastAPI, Query as QueryParam, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .corpus import FIXTURE_NAMES, UnknownFixtureError, fixture_source, load_fixture
from .engine import Session, UnknownGraphError
from .rules import (
    UnknownRuleError,
    catalogue_to_dicts,
    render_report,
    report_to_dict,
    term_text,
)
from .sparql import Solution, evaluate, parse_query
from .turtle import ParseError, serialize_turtle

REPORT_RING_SIZE = 32


class PeriodicChecker:
    """Background sweep: every `interval` seconds, re-check all graphs and
    append the reports to per-graph ring buffers."""

    def __init__(self, session: Session, interval: float):
        self.session = session
        self.interval = interval
        self.reports: dict[str, deque] = {}
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None

    def sweep_once(self) -> None:
        for graph_id in self.session.graph_ids():
            report = self.session.run_check(graph_id)
            ring = self.reports.setdefault(graph_id, deque(maxlen=REPORT_RING_SIZE))
            ring.append(report_to_dict(report))

    def _run(self) -> None:
        while not self._stop.wait(self.interval):
            self.sweep_once()

    def start(self) -> None:
        self._thread = threading.Thread(target=self._run, daemon=True,
                                        name="daont-periodic-check")
        self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=2.0)


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    return JSONResponse({"code": code, "message": message, **extra},
                        status_code=status)


def _parse_error(exc: ParseError, code: str = "parse_error") -> JSONResponse:
    return _error(400, code, str(exc), line=exc.line, column=exc.column)


def create_app(session: Session | None = None,
               check_interval: float | None = None,
               dashboard_dir: str | None = None) -> FastAPI:
    session = session if session is not None else Session()
    ids = itertools.count(1)
    checker = PeriodicChecker(session, check_interval) if check_interval else None

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        if checker is not None:
            checker.start()
        yield
        if checker is not None:
            checker.stop()

    app = FastAPI(title="daont-verify", version="0.1.0", lifespan=lifespan)
    app.state.session = session
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(UnknownGraphError)
    async def _unknown_graph(_req, exc):  # noqa: ANN001
        return _error(404, "unknown_graph", f"unknown graph {exc.args[0]!r}")

    @app.exception_handler(UnknownRuleError)
    async def _unknown_rule(_req, exc):  # noqa: ANN001
        return _error(400, "unknown_rule", f"unknown rule id {exc.args[0]!r}")

    @app.exception_handler(UnknownFixtureError)
    async def _unknown_fixture(_req, exc):  # noqa: ANN001
        return _error(404, "unknown_fixture", str(exc.args[0]))

    # -- fixtures ---------------------------------------------------------

    @app.get("/api/fixtures")
    def list_fixtures() -> list[dict]:
        return [{"name": name, "triple_count": len(load_fixture(name))}
                for name in FIXTURE_NAMES]

    @app.get("/api/fixtures/{name}")
    def get_fixture(name: str) -> PlainTextResponse:
        return PlainTextResponse(fixture_source(name), media_type="text/turtle")

    # -- graph registry -----------------------------------------------------

    @app.get("/api/graphs")
    def list_graphs() -> list[dict]:
        out = []
        for graph_id in session.graph_ids():
            out.append({
                "graph_id": graph_id,
                "version": session.version(graph_id),
                "triple_count": len(session.graph(graph_id)),
            })
        return out

    @app.post("/api/graphs", status_code=201)
    async def create_graph(request: Request,
                           id: str | None = QueryParam(default=None)):
        body = (await request.body()).decode("utf-8")
        graph_id = id if id else f"g{next(ids)}"
        if id is not None and session.has_graph(graph_id):
            return _error(409, "graph_exists",
                          f"graph {graph_id!r} already exists")
        try:
            version = session.load_contracts([body], graph_id)
        except ParseError as exc:
            return _parse_error(exc)
        return {
            "graph_id": graph_id,
            "version": version,
            "triple_count": len(session.graph(graph_id)),
        }

    @app.get("/api/graphs/{graph_id}")
    def get_graph(graph_id: str) -> PlainTextResponse:
        graph = session.graph(graph_id)
        env = session.prefixes(graph_id)
        return PlainTextResponse(serialize_turtle(graph, env),
                                 media_type="text/turtle")

    # -- checking -----------------------------------------------------------

    @app.post("/api/graphs/{graph_id}/check")
    def check_graph(graph_id: str, rules: str | None = None,
                    infer: bool = False) -> Response:
        rule_ids = None if rules in (None, "", "all") else \
            [r.strip() for r in rules.split(",") if r.strip()]
        report = session.run_check(graph_id, rule_ids, infer=infer)
        return Response(render_report(report, "json"),
                        media_type="application/json")

    @app.get("/api/graphs/{graph_id}/reports")
    def periodic_reports(graph_id: str) -> list[dict]:
        session.graph(graph_id)  # 404 on unknown id
        if checker is None:
            return []
        return list(checker.reports.get(graph_id, ()))

    # -- what-if edits --------------------------------------------------------

    @app.post("/api/graphs/{graph_id}/facts")
    async def edit_facts(graph_id: str, request: Request,
                         mode: str = "add") -> Response:
        if mode not in ("add", "remove"):
            return _error(400, "bad_request",
                          f"mode must be 'add' or 'remove', got {mode!r}")
        fragment = (await request.body()).decode("utf-8")
        try:
            version = session.apply_whatif_turtle(graph_id, fragment, mode)
        except ParseError as exc:
            return _parse_error(exc)
        return JSONResponse({"version": version})

    # -- queries and catalogue ------------------------------------------------

    @app.post("/api/graphs/{graph_id}/query")
    async def query_graph(graph_id: str, request: Request) -> Response:
        text = (await request.body()).decode("utf-8")
        graph = session.graph(graph_id)
        try:
            query = parse_query(text)
        except ParseError as exc:
            return _parse_error(exc, code="unsupported_query")
        solutions = sorted(evaluate(graph, query), key=Solution.sort_key)
        rows = [{v: term_text(t) for v, t in s.bindings} for s in solutions]
        return JSONResponse(rows)

    @app.get("/api/rules")
    def rule_catalogue() -> list[dict]:
        return catalogue_to_dicts(session.rules)

    if dashboard_dir is not None and Path(dashboard_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=dashboard_dir, html=True),
                  name="dashboard")

    return app
