"""Rule catalogue fidelity, the check pipeline and report rendering."""

from __future__ import annotations

import json

import pytest

from daont_verify.corpus import CONTRACT_FIXTURES, load_fixture
from daont_verify.rdf import Graph, Iri, Triple, merge
from daont_verify.rules import (
    ARTICLE_RULE_IDS,
    ComplianceRule,
    OBLIGATION,
    PERMISSION_EXCEPTION,
    PROHIBITION,
    QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION,
    QUERY_B2C_MISSING_PROVISION,
    QUERY_B2G_PROHIBITED_ACTION,
    builtin_rules,
    catalogue_to_dicts,
    check,
    render_report,
    report_to_dict,
    rule_sort_key,
    rules_by_id,
)
from daont_verify.vocab import RDF_TYPE, da, odrl


def article_rules() -> list[ComplianceRule]:
    by_id = rules_by_id()
    return [by_id[rid] for rid in ARTICLE_RULE_IDS]


# -- catalogue -----------------------------------------------------------------


def test_article_rules_use_the_printed_queries():
    by_id = rules_by_id()
    assert by_id["R-4-1"].query == QUERY_B2C_MISSING_PROVISION
    assert by_id["R-8-6"].query == QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION
    assert by_id["R-19-2a"].query == QUERY_B2G_PROHIBITED_ACTION


def test_deontic_row_matches_the_three_articles():
    by_id = rules_by_id()
    assert by_id["R-4-1"].modality == OBLIGATION
    assert by_id["R-8-6"].modality == PERMISSION_EXCEPTION
    assert by_id["R-19-2a"].modality == PROHIBITION
    assert by_id["R-4-1"].deontic == ("obligation", odrl.Duty)
    assert by_id["R-8-6"].deontic == ("permission", odrl.Permission)
    assert by_id["R-19-2a"].deontic == ("prohibition", odrl.Prohibition)


def test_contexts_per_article():
    by_id = rules_by_id()
    assert by_id["R-4-1"].context == "B2C"
    assert by_id["R-8-6"].context == "B2B"
    assert by_id["R-19-2a"].context == "B2G"
    assert by_id["R-FRAND"].context == "B2B"


def test_cq_aliases_share_query_text():
    by_id = rules_by_id()
    assert by_id["CQ-10"].query == by_id["R-4-1"].query
    assert by_id["CQ-11"].query == by_id["R-8-6"].query
    assert by_id["CQ-12"].query == by_id["R-19-2a"].query
    assert by_id["CQ-10"].alias_of == "R-4-1"


def test_every_rule_query_parses():
    for rule in builtin_rules():
        rule.parsed()  # raises on failure


def test_rule_sort_key_is_natural():
    ids = ["R-8-6", "CQ-10", "CQ-2", "R-4-1", "CQ-1", "R-19-2a", "R-FRAND"]
    assert sorted(ids, key=rule_sort_key) == [
        "CQ-1", "CQ-2", "CQ-10", "R-4-1", "R-8-6", "R-19-2a", "R-FRAND"]


def test_catalogue_export_embeds_queries():
    entries = catalogue_to_dicts()
    by_id = {e["id"]: e for e in entries}
    assert by_id["R-8-6"]["query"] == QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION
    assert by_id["R-8-6"]["article"] == "8(6)"


# -- check ----------------------------------------------------------------------


def test_union_check_finds_exactly_three_violations():
    union = merge(*(load_fixture(n) for n in CONTRACT_FIXTURES))
    report = check(union, article_rules(), graph_id="all")
    assert report.overall_status == "violated"
    assert len(report.violations) == 3
    assert {v.rule_id for v in report.violations} == set(ARTICLE_RULE_IDS)


def test_b2b_compliant_clean_under_all_rules():
    report = check(load_fixture("b2b-compliant"), builtin_rules())
    assert report.overall_status == "compliant"
    assert report.violations == []


def test_empty_graph_all_compliant():
    report = check(Graph(), builtin_rules())
    assert report.overall_status == "compliant"
    assert all(r.status == "compliant" for r in report.results)


def test_context_separation():
    b2c_rule = rules_by_id()["R-4-1"]
    for name in ("b2b-violation", "b2b-compliant", "b2g-violation",
                 "b2g-compliant"):
        report = check(load_fixture(name), [b2c_rule])
        assert report.violations == []


def test_informational_rules_never_violate():
    union = merge(*(load_fixture(n) for n in CONTRACT_FIXTURES))
    cq_rules = [r for r in builtin_rules() if r.informational]
    report = check(union, cq_rules)
    assert report.overall_status == "compliant"
    assert report.violations == []
    # ... but the verdict aliases still carry answers.
    assert report.result_for("CQ-12").answers


def test_cwa_clearing_art_4_1():
    g = load_fixture("b2c-violation")
    ns = "http://example.org/b2c-violation#"
    fresh = Iri(ns + "provision_whatif")
    rule = rules_by_id()["R-4-1"]
    assert len(check(g, [rule]).violations) == 1
    cleared = g.copy()
    cleared.insert(Triple(Iri(ns + "watchManufacturer"),
                          da.performsLegalAction, fresh))
    cleared.insert(Triple(fresh, RDF_TYPE, da.DataProvision))
    assert len(check(cleared, [rule]).violations) == 0


def test_cwa_clearing_art_8_6():
    g = load_fixture("b2b-violation")
    ns = "http://example.org/b2b-violation#"
    rule = rules_by_id()["R-8-6"]
    assert len(check(g, [rule]).violations) == 1
    cleared = g.copy()
    cleared.insert(Triple(Iri(ns + "robotData1"), da.containsTradeSecret,
                          Iri(ns + "secretJustification1")))
    assert len(check(cleared, [rule]).violations) == 0


def test_prohibition_is_presence_triggered():
    g = load_fixture("b2g-violation")
    ns = "http://example.org/b2g-violation#"
    rule = rules_by_id()["R-19-2a"]
    assert len(check(g, [rule]).violations) == 1
    cleared = g.copy()
    cleared.remove(Triple(Iri(ns + "competitiveProductDevelopment1"), RDF_TYPE,
                          da.UseDataToDevelopCompetingProduct))
    assert len(check(cleared, [rule]).violations) == 0


def test_inference_does_not_change_results():
    for name in CONTRACT_FIXTURES:
        g = load_fixture(name)
        plain = check(g, builtin_rules(), infer=False)
        inferred = check(g, builtin_rules(), infer=True)
        assert [(r.rule.id, r.status, len(r.violations), len(r.answers))
                for r in plain.results] == \
               [(r.rule.id, r.status, len(r.violations), len(r.answers))
                for r in inferred.results]


def test_failing_rule_is_skipped_not_fatal():
    bad = ComplianceRule(
        id="R-BAD", article="", modality=OBLIGATION, context="any",
        label="broken on purpose", query="SELECT ?x WHERE { OPTIONAL }",
        message="")
    report = check(load_fixture("b2c-violation"),
                   [bad] + article_rules())
    assert report.result_for("R-BAD").status == "skipped"
    assert "OPTIONAL" in report.result_for("R-BAD").error
    # The real rules still ran.
    assert report.result_for("R-4-1").status == "violated"


# -- rendering ----------------------------------------------------------------


def test_json_report_shape():
    union = merge(*(load_fixture(n) for n in CONTRACT_FIXTURES))
    report = check(union, article_rules(), graph_id="all")
    data = json.loads(render_report(report, "json"))
    assert set(data) == {"graph_id", "graph_version", "timestamp",
                         "overall_status", "rules"}
    assert data["overall_status"] == "violated"
    entry = next(r for r in data["rules"] if r["id"] == "R-4-1")
    assert set(entry) == {"id", "article", "modality", "context", "status",
                          "duration_us", "violations"}
    (violation,) = entry["violations"]
    assert violation["bindings"]["holder"].endswith("watchManufacturer")
    assert "message" in violation


def test_render_is_deterministic():
    report = check(load_fixture("b2g-violation"), article_rules())
    assert render_report(report, "json") == render_report(report, "json")
    assert render_report(report, "text") == render_report(report, "text")


def test_text_report_names_the_violating_entities():
    report = check(load_fixture("b2g-violation"), article_rules(),
                   graph_id="b2g-violation")
    text = render_report(report, "text")
    assert "healthAuthority" in text
    assert "competitiveProductDevelopment1" in text
    assert "19(2)(a)" in text


def test_compliant_report_json_status():
    report = check(Graph(), article_rules())
    data = json.loads(render_report(report, "json"))
    assert data["overall_status"] == "compliant"


def test_report_dict_orders_rules_by_id():
    report = check(Graph(), builtin_rules())
    ids = [r["id"] for r in report_to_dict(report)["rules"]]
    assert ids == sorted(ids, key=rule_sort_key)
