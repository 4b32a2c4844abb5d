"""Closed-world compliance verification for EU Data Act data-sharing
contracts represented as RDF graphs."""

from .rdf import Blank, Graph, Iri, Literal, Term, Triple, merge
from .turtle import ParseDiagnostic, ParseError, PrefixMap, parse_turtle, serialize_turtle
from .sparql import (
    Comparison,
    ExistsGroup,
    NotExistsGroup,
    Query,
    Solution,
    TriplePattern,
    Variable,
    brute_force_evaluate,
    evaluate,
    parse_query,
)
from .vocab import default_prefixes, rdfs_closure, schema_graph
from .corpus import FIXTURE_NAMES, expected_outcomes, fixture_source, load_fixture
from .rules import (
    ComplianceReport,
    ComplianceRule,
    Violation,
    builtin_rules,
    check,
    render_report,
)
from .engine import Session

__all__ = [
    "Blank", "Graph", "Iri", "Literal", "Term", "Triple", "merge",
    "ParseDiagnostic", "ParseError", "PrefixMap", "parse_turtle",
    "serialize_turtle",
    "Comparison", "ExistsGroup", "NotExistsGroup", "Query", "Solution",
    "TriplePattern", "Variable", "brute_force_evaluate", "evaluate",
    "parse_query",
    "default_prefixes", "rdfs_closure", "schema_graph",
    "FIXTURE_NAMES", "expected_outcomes", "fixture_source", "load_fixture",
    "ComplianceReport", "ComplianceRule", "Violation", "builtin_rules",
    "check", "render_report",
    "Session",
]

__version__ = "0.1.0"
