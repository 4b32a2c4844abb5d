"""Session snapshots, what-if edits and report isolation."""

from __future__ import annotations

import pytest

from daont_verify.corpus import CONTRACT_FIXTURES, fixture_source, load_fixture
from daont_verify.engine import Session, UnknownGraphError
from daont_verify.rdf import Iri, Triple
from daont_verify.rules import UnknownRuleError, render_report, report_to_dict
from daont_verify.turtle import ParseError
from daont_verify.vocab import RDF_TYPE, da, schema_graph

B2C_NS = "http://example.org/b2c-violation#"

PROVISION_FACTS = [
    Triple(Iri(B2C_NS + "watchManufacturer"), da.performsLegalAction,
           Iri(B2C_NS + "provision_whatif")),
    Triple(Iri(B2C_NS + "provision_whatif"), RDF_TYPE, da.DataProvision),
]


def test_load_all_fixtures_size_arithmetic():
    session = Session()
    version = session.load_fixtures(CONTRACT_FIXTURES, "all")
    assert version == 1
    expected = len(schema_graph()) + sum(
        len(load_fixture(n)) for n in CONTRACT_FIXTURES)
    assert len(session.graph("all")) == expected


def test_load_zero_sources_is_schema_only():
    session = Session()
    session.load_contracts([], "empty")
    assert session.graph("empty") == schema_graph()


def test_malformed_source_names_index_and_line():
    session = Session()
    bad = "@prefix ex: <http://example.org/> .\nex:a ex:p ( ) ."
    with pytest.raises(ParseError) as err:
        session.load_contracts([fixture_source("b2c-violation"), bad], "x")
    assert err.value.source_index == 1
    assert err.value.line == 2
    assert not session.has_graph("x")


def test_run_check_on_all_fixtures():
    session = Session()
    session.load_fixtures(CONTRACT_FIXTURES, "all")
    report = session.run_check("all", ["R-4-1", "R-8-6", "R-19-2a"])
    assert len(report.violations) == 3
    only_b2c = session.run_check("all", ["R-4-1"])
    assert len(only_b2c.violations) == 1


def test_unknown_graph_and_rule_errors():
    session = Session()
    with pytest.raises(UnknownGraphError):
        session.run_check("nope")
    session.load_contracts([], "g")
    with pytest.raises(UnknownRuleError):
        session.run_check("g", ["R-404"])


def test_whatif_add_then_remove_restores_graph():
    session = Session()
    session.load_fixtures(["b2c-violation"], "g")
    original = session.graph("g")
    v2 = session.apply_whatif("g", add=PROVISION_FACTS)
    assert v2 == 2
    assert session.run_check("g", ["R-4-1"]).violations == []
    v3 = session.apply_whatif("g", remove=PROVISION_FACTS)
    assert v3 == 3
    assert session.graph("g") == original
    assert len(session.run_check("g", ["R-4-1"]).violations) == 1


def test_whatif_identity_edit_bumps_version():
    session = Session()
    session.load_fixtures(["b2b-compliant"], "g")
    before = session.graph("g")
    version = session.apply_whatif("g")
    assert version == 2
    assert session.graph("g") == before
    assert session.graph("g") is not before


def test_snapshot_isolation_and_report_stability():
    session = Session()
    session.load_fixtures(["b2c-violation"], "g")
    report_v1 = session.run_check("g", ["R-4-1"])
    rendered_before = render_report(report_v1, "json")
    session.apply_whatif("g", add=PROVISION_FACTS)
    # The old snapshot and its report are untouched by the edit.
    assert render_report(report_v1, "json") == rendered_before
    assert report_v1.graph_version == 1
    assert len(session.graph("g", version=1)) + 2 == len(session.graph("g"))


def test_report_records_snapshot_version():
    session = Session()
    session.load_fixtures(["b2c-violation"], "g")
    session.apply_whatif("g", add=PROVISION_FACTS)
    report = session.run_check("g", ["R-4-1"])
    assert report.graph_version == 2
    assert report.violations == []


def test_run_check_is_deterministic_modulo_timestamp():
    session = Session()
    session.load_fixtures(CONTRACT_FIXTURES, "all")
    a = report_to_dict(session.run_check("all"))
    b = report_to_dict(session.run_check("all"))
    a.pop("timestamp"), b.pop("timestamp")
    for entry in a["rules"] + b["rules"]:
        entry.pop("duration_us")
    assert a == b


def test_whatif_turtle_fragment_uses_graph_prefixes():
    session = Session()
    session.load_fixtures(["b2c-violation"], "g")
    # The fixture's own prefixes (da:, :) are in the graph's environment.
    fragment = (":watchManufacturer da:performsLegalAction :provision_whatif .\n"
                ":provision_whatif a da:DataProvision .")
    session.apply_whatif_turtle("g", fragment, "add")
    assert session.run_check("g", ["R-4-1"]).violations == []
    session.apply_whatif_turtle("g", fragment, "remove")
    assert len(session.run_check("g", ["R-4-1"]).violations) == 1
