"""HTTP API surface, error codes and the interactive what-if loop."""

from __future__ import annotations

import json

import pytest
from fastapi.testclient import TestClient

from daont_verify.corpus import CONTRACT_FIXTURES, fixture_source, load_fixture
from daont_verify.engine import Session
from daont_verify.rules import QUERY_B2G_PROHIBITED_ACTION
from daont_verify.service import PeriodicChecker, create_app
from daont_verify.turtle import parse_turtle
from daont_verify.vocab import schema_graph

PROVISION_FRAGMENT = """\
@prefix da: <https://w3id.org/def/daont#> .
@prefix : <http://example.org/b2c-violation#> .
:watchManufacturer da:performsLegalAction :provision_whatif .
:provision_whatif a da:DataProvision .
"""


@pytest.fixture()
def client() -> TestClient:
    return TestClient(create_app())


def post_fixture(client: TestClient, name: str, graph_id: str | None = None):
    url = "/api/graphs" + (f"?id={graph_id}" if graph_id else "")
    return client.post(url, content=fixture_source(name),
                       headers={"content-type": "text/turtle"})


def test_create_graph_counts_schema_plus_fixture(client):
    r = post_fixture(client, "b2c-violation", "b2c")
    assert r.status_code == 201
    body = r.json()
    assert body == {
        "graph_id": "b2c",
        "version": 1,
        "triple_count": len(schema_graph()) + len(load_fixture("b2c-violation")),
    }


def test_create_graph_empty_body_is_schema_only(client):
    r = client.post("/api/graphs", content=b"")
    assert r.status_code == 201
    assert r.json()["triple_count"] == len(schema_graph())


def test_create_graph_parse_error(client):
    r = client.post("/api/graphs", content=b"ex:a ex:p ( ) .")
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "parse_error"
    assert body["line"] == 1 and body["column"] >= 1


def test_duplicate_graph_id_conflict(client):
    assert post_fixture(client, "b2c-violation", "dup").status_code == 201
    assert post_fixture(client, "b2c-violation", "dup").status_code == 409


def test_check_union_of_six(client):
    union = "\n".join(fixture_source(n) for n in CONTRACT_FIXTURES)
    r = client.post("/api/graphs?id=all", content=union)
    assert r.status_code == 201
    report = client.post(
        "/api/graphs/all/check?rules=R-4-1,R-8-6,R-19-2a").json()
    assert report["overall_status"] == "violated"
    assert sum(len(e["violations"]) for e in report["rules"]) == 3


def test_check_compliant_graph(client):
    post_fixture(client, "b2g-compliant", "ok")
    report = client.post("/api/graphs/ok/check").json()
    assert report["overall_status"] == "compliant"


def test_check_unknown_graph_404(client):
    r = client.post("/api/graphs/ghost/check")
    assert r.status_code == 404
    assert r.json()["code"] == "unknown_graph"


def test_check_unknown_rule_400(client):
    post_fixture(client, "b2c-violation", "g")
    r = client.post("/api/graphs/g/check?rules=R-404")
    assert r.status_code == 400
    assert r.json()["code"] == "unknown_rule"


def test_whatif_flip_and_revert(client):
    post_fixture(client, "b2c-violation", "g")

    def status():
        return client.post("/api/graphs/g/check?rules=R-4-1").json()[
            "overall_status"]

    assert status() == "violated"
    r = client.post("/api/graphs/g/facts?mode=add", content=PROVISION_FRAGMENT)
    assert r.status_code == 200 and r.json()["version"] == 2
    assert status() == "compliant"
    r = client.post("/api/graphs/g/facts?mode=remove",
                    content=PROVISION_FRAGMENT)
    assert r.json()["version"] == 3
    assert status() == "violated"


def test_whatif_fragment_without_directives_uses_graph_env(client):
    post_fixture(client, "b2c-violation", "g")
    fragment = (":watchManufacturer da:performsLegalAction :p1 .\n"
                ":p1 a da:DataProvision .")
    r = client.post("/api/graphs/g/facts?mode=add", content=fragment)
    assert r.status_code == 200
    assert client.post("/api/graphs/g/check?rules=R-4-1").json()[
        "overall_status"] == "compliant"


def test_whatif_empty_fragment_bumps_version_only(client):
    post_fixture(client, "b2c-violation", "g")
    count_before = client.get("/api/graphs/g").text
    r = client.post("/api/graphs/g/facts?mode=add", content=b"")
    assert r.status_code == 200 and r.json()["version"] == 2
    assert client.get("/api/graphs/g").text == count_before


def test_whatif_bad_mode(client):
    post_fixture(client, "b2c-violation", "g")
    r = client.post("/api/graphs/g/facts?mode=replace", content=b"")
    assert r.status_code == 400


def test_facts_parse_error(client):
    post_fixture(client, "b2c-violation", "g")
    r = client.post("/api/graphs/g/facts?mode=add", content=b"nonsense here")
    assert r.status_code == 400
    assert r.json()["code"] == "parse_error"


def test_get_graph_turtle_round_trips(client):
    post_fixture(client, "b2b-violation", "g")
    text = client.get("/api/graphs/g").text
    graph = parse_turtle(text)
    assert len(graph) == len(schema_graph()) + len(load_fixture("b2b-violation"))


def test_rules_catalogue(client):
    rules = client.get("/api/rules").json()
    entry = next(r for r in rules if r["id"] == "R-8-6")
    assert entry["article"] == "8(6)"
    assert "FILTER NOT EXISTS" in entry["query"]


def test_query_endpoint(client):
    post_fixture(client, "b2g-violation", "g")
    r = client.post("/api/graphs/g/query", content=QUERY_B2G_PROHIBITED_ACTION)
    assert r.status_code == 200
    assert r.json() == [{
        "action": "http://example.org/b2g-violation#competitiveProductDevelopment1",
        "publicBody": "http://example.org/b2g-violation#healthAuthority",
    }]


def test_query_endpoint_rejects_out_of_subset(client):
    post_fixture(client, "b2c-violation", "g")
    r = client.post("/api/graphs/g/query",
                    content=b"SELECT ?x WHERE { ?x ?y ?z } ORDER BY ?x")
    assert r.status_code == 400
    body = r.json()
    assert body["code"] == "unsupported_query"
    assert "ORDER BY" in body["message"]


def test_fixture_endpoints(client):
    names = {f["name"] for f in client.get("/api/fixtures").json()}
    assert len(names) == 7
    text = client.get("/api/fixtures/b2b-compliant").text
    assert "frand247" in text
    assert client.get("/api/fixtures/nope").status_code == 404


def test_idempotent_reads_modulo_timestamp(client):
    post_fixture(client, "b2c-violation", "g")
    a = client.post("/api/graphs/g/check?rules=R-4-1").json()
    b = client.post("/api/graphs/g/check?rules=R-4-1").json()
    for report in (a, b):
        report.pop("timestamp")
        for entry in report["rules"]:
            entry.pop("duration_us")
    assert a == b
    assert client.get("/api/graphs/g").text == client.get("/api/graphs/g").text


def test_version_monotonicity(client):
    post_fixture(client, "b2c-violation", "g")
    versions = [client.post("/api/graphs/g/facts?mode=add",
                            content=b"").json()["version"]
                for _ in range(3)]
    assert versions == [2, 3, 4]


def test_graph_list(client):
    post_fixture(client, "b2c-violation", "one")
    post_fixture(client, "b2b-violation", "two")
    listed = client.get("/api/graphs").json()
    assert [g["graph_id"] for g in listed] == ["one", "two"]


def test_periodic_checker_populates_ring():
    session = Session()
    session.load_fixtures(["b2c-violation"], "g")
    checker = PeriodicChecker(session, interval=3600)
    checker.sweep_once()
    checker.sweep_once()
    reports = checker.reports["g"]
    assert len(reports) == 2
    assert all(r["overall_status"] == "violated" for r in reports)


def test_reports_endpoint_empty_without_periodic_mode(client):
    post_fixture(client, "b2c-violation", "g")
    assert client.get("/api/graphs/g/reports").json() == []
    assert client.get("/api/graphs/ghost/reports").status_code == 404
