"""The named contract scenario graphs: three violating / three compliant
data-sharing contracts plus a competency-question demo graph.

Each fixture lives under its own http://example.org/<name># namespace so
the fixtures are pairwise IRI-disjoint: checking the union of all six
contract graphs yields exactly the sum of the per-fixture results. None of
them contains blank nodes, which keeps serialization round-trips exact.
"""

from __future__ import annotations

from importlib import resources

from .rdf import Graph
from .turtle import PrefixMap, parse_turtle

FIXTURE_NAMES: tuple[str, ...] = (
    "b2c-violation",
    "b2c-compliant",
    "b2b-violation",
    "b2b-compliant",
    "b2g-violation",
    "b2g-compliant",
    "cq-demo",
)

CONTRACT_FIXTURES: tuple[str, ...] = FIXTURE_NAMES[:6]


class UnknownFixtureError(KeyError):
    """No fixture is shipped under the requested name."""


def fixture_source(name: str) -> str:
    """The fixture's Turtle text, exactly as shipped."""
    if name not in FIXTURE_NAMES:
        raise UnknownFixtureError(
            f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    path = resources.files(__package__).joinpath("fixtures", f"{name}.ttl")
    return path.read_text(encoding="utf-8")


def load_fixture(name: str, prefixes: PrefixMap | None = None) -> Graph:
    """Parse the named fixture into a fresh graph."""
    g = parse_turtle(fixture_source(name), prefixes=prefixes)
    g.label = name
    return g


def expected_outcomes() -> dict[str, dict[str, int]]:
    """Per-fixture expected violation counts for the built-in article rules
    (and the FRAND rule, which no shipped fixture trips)."""
    zeros = {"R-4-1": 0, "R-8-6": 0, "R-19-2a": 0, "R-FRAND": 0}
    outcomes = {name: dict(zeros) for name in FIXTURE_NAMES}
    outcomes["b2c-violation"]["R-4-1"] = 1
    outcomes["b2b-violation"]["R-8-6"] = 1
    outcomes["b2g-violation"]["R-19-2a"] = 1
    return outcomes
