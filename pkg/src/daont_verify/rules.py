"""Built-in compliance rule catalogue and the check/report pipeline.

Three article rules span the three sharing contexts and the three deontic
modalities:

  R-4-1    B2C  obligation            missing mandatory data provision
  R-8-6    B2B  permission-exception  refusal without trade-secret justification
  R-19-2a  B2G  prohibition           competing-product use of shared data

All three read matches as violations: under the closed-world assumption a
FILTER NOT EXISTS block treats a missing required fact as non-compliance,
while the prohibition rule simply detects the presence of the forbidden
action. R-FRAND is an additional check of this artifact (no printed
counterpart) flagging B2B contracts whose FRAND terms node carries none of
the three fairness flags. The CQ-* rules are informational queries; they
contribute answers, never violations. CQ-10..CQ-12 alias the article rules.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import lru_cache

from .rdf import Blank, Graph, Iri, Literal, Term
from .sparql import (
    EvaluationError,
    GuardExceededError,
    Query,
    QueryAstError,
    Solution,
    evaluate,
    parse_query,
)
from .turtle import ParseError
from .vocab import DEONTIC_MARKERS, rdfs_closure, schema_graph

OBLIGATION = "obligation"
PERMISSION_EXCEPTION = "permission-exception"
PROHIBITION = "prohibition"

# Deontic comparison row per article rule: (deontic type, ODRL marker).
DEONTIC_TYPE = {
    OBLIGATION: ("obligation", DEONTIC_MARKERS["obligation"]),
    PERMISSION_EXCEPTION: ("permission", DEONTIC_MARKERS["permission"]),
    PROHIBITION: ("prohibition", DEONTIC_MARKERS["prohibition"]),
}

@lru_cache(maxsize=256)
def _parse_cached(text: str) -> Query:
    return parse_query(text)


QUERY_B2C_MISSING_PROVISION = """\
SELECT ?holder ?data
WHERE {
  ?sharing a da:B2CDataSharing;
           da:governedBy ?c .
  ?c dpv:hasRecipient ?user .
  ?user a da:ConsumerUser;
        da:ownsOrUses ?product;
        da:requestsAccessTo ?data.
  ?holder a da:DataHolder;
          dpv:hasData ?data .
  FILTER NOT EXISTS {
    ?holder da:performsLegalAction ?provision .
    ?provision a da:DataProvision .
  }
}
"""

QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION = """\
SELECT ?holder ?recipient
WHERE {
  ?sharing a da:B2BDataSharing;
           da:governedBy ?c;
           da:authorizedBy ?user .
  ?user da:ownsOrUses ?product .
  ?product da:generatesData ?data .
  ?holder a da:DataHolder;
          dpv:hasData ?data .
  ?c dpv:hasRecipient ?recipient .
  FILTER NOT EXISTS {
    ?holder da:performsLegalAction ?provision .
    ?provision a da:DataProvision .
  }
  FILTER NOT EXISTS {
    ?data da:containsTradeSecret ?s .
  }
}
"""

QUERY_B2G_PROHIBITED_ACTION = """\
SELECT ?publicBody ?action
WHERE {
  ?sharing a da:B2GDataSharing;
           da:governedBy ?c .
  ?c dpv:hasRecipient ?publicBody .
  ?publicBody a da:PublicSectorBody .
  ?holder a da:DataHolder;
          dpv:hasData ?data;
          dpv:hasRecipient ?publicBody .
  ?publicBody da:performsAction ?action .
  ?action a da:UseDataToDevelopCompetingProduct .
}
"""

QUERY_FRAND_TERMS_MISSING = """\
PREFIX da: <https://w3id.org/def/daont#>
SELECT ?sharing ?contract
WHERE {
  ?sharing a da:B2BDataSharing ;
           da:governedBy ?contract .
  ?contract da:hasFRANDTerms ?terms .
  FILTER NOT EXISTS { ?terms da:isFair true . }
  FILTER NOT EXISTS { ?terms da:isReasonable true . }
  FILTER NOT EXISTS { ?terms da:isNonDiscriminatory true . }
}
"""


@dataclass(frozen=True)
class ComplianceRule:
    """One catalogue entry: a query plus how to read its matches."""

    id: str
    article: str
    modality: str  # obligation | permission-exception | prohibition | ""
    context: str   # B2C | B2B | B2G | any
    label: str
    query: str
    message: str = ""                  # template over the projected variables
    reading: str = "match-is-violation"
    informational: bool = False        # CQ rules: answers, never violations
    alias_of: str | None = None        # CQ-10..12 alias the article rules

    def parsed(self) -> Query:
        """Parsed query; cached per text, so callers must not mutate it."""
        return _parse_cached(self.query)

    @property
    def deontic(self) -> tuple[str, Iri] | None:
        """(deontic type, ODRL marker) for modal rules, None for CQ rows."""
        return DEONTIC_TYPE.get(self.modality)


def _cq(num: int, question: str, query: str, *, context: str = "any",
        article: str = "", modality: str = "", alias_of: str | None = None,
        ) -> ComplianceRule:
    return ComplianceRule(
        id=f"CQ-{num}", article=article, modality=modality, context=context,
        label=question, query=query, informational=True, alias_of=alias_of,
    )


def builtin_rules() -> list[ComplianceRule]:
    """The full catalogue: article rules, the FRAND check and CQ-1..CQ-12."""
    rules = [
        ComplianceRule(
            id="R-4-1",
            article="4(1)",
            modality=OBLIGATION,
            context="B2C",
            label="Data holder fails to provide consumer-requested product data",
            query=QUERY_B2C_MISSING_PROVISION,
            message=("Data holder {holder} has not provided the requested data "
                     "{data} to the consumer (Article 4(1) obligation unmet)."),
        ),
        ComplianceRule(
            id="R-8-6",
            article="8(6)",
            modality=PERMISSION_EXCEPTION,
            context="B2B",
            label="Data holder refuses B2B sharing without trade-secret justification",
            query=QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION,
            message=("Data holder {holder} refused to share with recipient "
                     "{recipient} without a trade-secret justification "
                     "(Article 8(6))."),
        ),
        ComplianceRule(
            id="R-19-2a",
            article="19(2)(a)",
            modality=PROHIBITION,
            context="B2G",
            label="Public sector body uses shared data to develop a competing product",
            query=QUERY_B2G_PROHIBITED_ACTION,
            message=("Public sector body {publicBody} performed the prohibited "
                     "action {action} on data obtained through B2G sharing "
                     "(Article 19(2)(a))."),
        ),
        ComplianceRule(
            id="R-FRAND",
            article="8-12",
            modality=OBLIGATION,
            context="B2B",
            label="B2B contract carries no FRAND terms flags",
            query=QUERY_FRAND_TERMS_MISSING,
            message=("B2B sharing {sharing} under contract {contract} asserts "
                     "none of the FRAND flags (Articles 8-12)."),
        ),
        _cq(1, "Who shares data with whom, and under what agreement?", """\
SELECT ?sharing ?recipient ?contract
WHERE {
  ?sharing da:governedBy ?contract .
  ?contract dpv:hasRecipient ?recipient .
}
"""),
        _cq(2, "What actions has a party performed?", """\
SELECT ?party ?action
WHERE {
  ?party da:performsAction ?action .
}
"""),
        _cq(3, "What obligations does a party have?", """\
SELECT ?holder ?data
WHERE {
  ?user da:requestsAccessTo ?data .
  ?holder a da:DataHolder ;
          dpv:hasData ?data .
}
"""),
        _cq(4, "Who manufactured a product?", """\
SELECT ?product ?manufacturer
WHERE {
  ?product da:manufacturedBy ?manufacturer .
}
"""),
        _cq(5, "Who uses a product?", """\
SELECT ?user ?product
WHERE {
  ?user da:ownsOrUses ?product .
}
"""),
        _cq(6, "What service does a product provide?", """\
SELECT ?product ?service
WHERE {
  ?product da:providesService ?service .
}
"""),
        _cq(7, "When does a legal rule apply?", """\
SELECT ?rule ?period
WHERE {
  ?rule da:appliesDuring ?period .
}
"""),
        _cq(8, "Where does data come from?", """\
SELECT ?data ?product
WHERE {
  ?product da:generatesData ?data .
}
"""),
        _cq(9, "Who holds the data?", """\
SELECT ?holder ?data
WHERE {
  ?holder a da:DataHolder ;
          dpv:hasData ?data .
}
"""),
        _cq(10, "Which data holders have violated Article 4(1) by failing to "
                "provide requested data from connected products?",
            QUERY_B2C_MISSING_PROVISION, context="B2C", article="4(1)",
            modality=OBLIGATION, alias_of="R-4-1"),
        _cq(11, "Which data holders have violated Article 8(6) by refusing data "
                "sharing without providing trade secret justification?",
            QUERY_B2B_REFUSAL_WITHOUT_JUSTIFICATION, context="B2B",
            article="8(6)", modality=PERMISSION_EXCEPTION, alias_of="R-8-6"),
        _cq(12, "Which public sector bodies have violated Article 19(2)(a) by "
                "developing competing products or services using data obtained "
                "through B2G data sharing?",
            QUERY_B2G_PROHIBITED_ACTION, context="B2G", article="19(2)(a)",
            modality=PROHIBITION, alias_of="R-19-2a"),
    ]
    return sorted(rules, key=lambda r: rule_sort_key(r.id))


ARTICLE_RULE_IDS = ("R-4-1", "R-8-6", "R-19-2a")


def rule_sort_key(rule_id: str) -> tuple:
    """Natural sort: digit runs compare numerically (CQ-2 before CQ-10)."""
    key: list[object] = []
    plain = num = ""
    for c in rule_id:
        if c.isdigit():
            if plain:
                key.append((0, plain))
                plain = ""
            num += c
        else:
            if num:
                key.append((1, int(num)))
                num = ""
            plain += c
    if plain:
        key.append((0, plain))
    if num:
        key.append((1, int(num)))
    return tuple(key)


def rules_by_id(rules: list[ComplianceRule] | None = None) -> dict[str, ComplianceRule]:
    return {r.id: r for r in (rules if rules is not None else builtin_rules())}


class UnknownRuleError(KeyError):
    """No catalogue rule under the requested id."""


def term_text(t: Term) -> str:
    """Flat text for report bindings: bare IRI text, _:label, Turtle-style
    literals."""
    if isinstance(t, Iri):
        return t.value
    if isinstance(t, Blank):
        return f"_:{t.label}"
    assert isinstance(t, Literal)
    if t.lang is not None:
        return f'"{t.lexical}"@{t.lang}'
    if t.datatype == "http://www.w3.org/2001/XMLSchema#string":
        return f'"{t.lexical}"'
    return f'"{t.lexical}"^^<{t.datatype}>'


@dataclass(frozen=True)
class Violation:
    rule_id: str
    solution: Solution
    message: str


@dataclass
class RuleResult:
    rule: ComplianceRule
    status: str  # compliant | violated | skipped
    violations: list[Violation] = field(default_factory=list)
    answers: list[Solution] = field(default_factory=list)
    duration_us: int = 0
    error: str | None = None


@dataclass
class ComplianceReport:
    graph_id: str
    timestamp: str
    results: list[RuleResult]
    graph_version: int = 1

    @property
    def overall_status(self) -> str:
        return "violated" if any(r.status == "violated" for r in self.results) \
            else "compliant"

    @property
    def violations(self) -> list[Violation]:
        return [v for r in self.results for v in r.violations]

    def result_for(self, rule_id: str) -> RuleResult:
        for r in self.results:
            if r.rule.id == rule_id:
                return r
        raise UnknownRuleError(rule_id)


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace(
        "+00:00", "Z")


def check(graph: Graph, rules: list[ComplianceRule] | None = None, *,
          infer: bool = False, graph_id: str = "graph",
          graph_version: int = 1) -> ComplianceReport:
    """Run the rules against the graph and assemble a report.

    Match-is-violation rules turn every solution into a Violation with a
    rendered message; informational rules record their solutions as answers
    only. With infer=True the graph is first closed under the schema's
    subclass/subproperty axioms. A rule whose evaluation fails is marked
    skipped with its error; it never aborts the report.
    """
    catalogue = rules if rules is not None else builtin_rules()
    if infer:
        graph = rdfs_closure(graph, schema_graph())
    results = []
    for rule in sorted(catalogue, key=lambda r: rule_sort_key(r.id)):
        started = time.perf_counter_ns()
        try:
            solutions = sorted(evaluate(graph, rule.parsed()),
                               key=Solution.sort_key)
        except (ParseError, QueryAstError, EvaluationError,
                GuardExceededError) as exc:
            duration = (time.perf_counter_ns() - started) // 1000
            results.append(RuleResult(rule, "skipped", duration_us=duration,
                                      error=str(exc)))
            continue
        duration = (time.perf_counter_ns() - started) // 1000
        if rule.informational:
            results.append(RuleResult(rule, "compliant", answers=solutions,
                                      duration_us=duration))
            continue
        violations = [
            Violation(rule.id, s,
                      rule.message.format(**{v: term_text(t)
                                             for v, t in s.bindings}))
            for s in solutions
        ]
        status = "violated" if violations else "compliant"
        results.append(RuleResult(rule, status, violations=violations,
                                  duration_us=duration))
    return ComplianceReport(graph_id, _utc_now(), results,
                            graph_version=graph_version)


def report_to_dict(report: ComplianceReport) -> dict:
    """Report as the wire-format dict (stable key order)."""
    return {
        "graph_id": report.graph_id,
        "graph_version": report.graph_version,
        "timestamp": report.timestamp,
        "overall_status": report.overall_status,
        "rules": [
            {
                "id": r.rule.id,
                "article": r.rule.article,
                "modality": r.rule.modality,
                "context": r.rule.context,
                "status": r.status,
                "duration_us": r.duration_us,
                "violations": [
                    {
                        "bindings": {v: term_text(t)
                                     for v, t in viol.solution.bindings},
                        "message": viol.message,
                    }
                    for viol in r.violations
                ],
                **({"error": r.error} if r.error is not None else {}),
            }
            for r in report.results
        ],
    }


def render_report(report: ComplianceReport, fmt: str = "text") -> str:
    """Deterministic rendering; equal reports yield identical bytes."""
    if fmt == "json":
        return json.dumps(report_to_dict(report), indent=2,
                          ensure_ascii=False) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [
        f"Compliance report for {report.graph_id!r} "
        f"(version {report.graph_version}, {report.timestamp})",
        f"Overall: {report.overall_status.upper()}",
        "",
    ]
    for r in report.results:
        header = f"[{r.status:>9}] {r.rule.id}"
        if r.rule.article:
            header += f"  Article {r.rule.article}"
        if r.rule.modality:
            header += f"  ({r.rule.modality}, {r.rule.context})"
        header += f"  {r.duration_us} us"
        lines.append(header)
        if r.error is not None:
            lines.append(f"    error: {r.error}")
        for viol in r.violations:
            lines.append(f"    {viol.message}")
            for var, term in viol.solution.bindings:
                lines.append(f"      ?{var} = {term_text(term)}")
    return "\n".join(lines) + "\n"


def catalogue_to_dicts(rules: list[ComplianceRule] | None = None) -> list[dict]:
    """Catalogue entries with embedded query text, for export."""
    out = []
    for r in (rules if rules is not None else builtin_rules()):
        out.append({
            "id": r.id,
            "article": r.article,
            "modality": r.modality,
            "context": r.context,
            "label": r.label,
            "informational": r.informational,
            "alias_of": r.alias_of,
            "query": r.query,
        })
    return out
