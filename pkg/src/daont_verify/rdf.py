"""RDF term model and an in-memory, index-backed triple store with set semantics.

Terms are immutable value objects; two literals are equal iff their lexical
form, datatype and language tag are equal (no value-space canonicalization,
so "1" and "01" are distinct xsd:integer literals).

A Graph keeps three lookup indexes -- by subject, by (predicate, object) and
by object -- which cover the access patterns of the compliance queries:
subject chains, rdf:type lookups and object joins.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Union

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

XSD_STRING = XSD_NS + "string"
XSD_BOOLEAN = XSD_NS + "boolean"
XSD_INTEGER = XSD_NS + "integer"
RDF_LANG_STRING = RDF_NS + "langString"

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")


class MalformedTermError(ValueError):
    """A term value violates its structural invariants."""


class MalformedTripleError(ValueError):
    """A triple has a literal subject or a non-IRI predicate."""


class FrozenGraphError(RuntimeError):
    """Mutation was attempted on a graph already published as a snapshot."""


@dataclass(frozen=True, order=True)
class Iri:
    value: str

    def __post_init__(self) -> None:
        if not self.value or not _SCHEME_RE.match(self.value):
            raise MalformedTermError(f"not an absolute IRI: {self.value!r}")

    def __repr__(self) -> str:
        return f"<{self.value}>"


@dataclass(frozen=True, order=True)
class Blank:
    label: str

    def __post_init__(self) -> None:
        if not self.label:
            raise MalformedTermError("blank node label must be non-empty")

    def __repr__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, order=True)
class Literal:
    lexical: str
    datatype: str = XSD_STRING
    lang: Optional[str] = None

    def __post_init__(self) -> None:
        # A language tag forces rdf:langString; rdf:langString requires a tag.
        if self.lang is not None:
            if self.datatype == XSD_STRING:
                object.__setattr__(self, "datatype", RDF_LANG_STRING)
            elif self.datatype != RDF_LANG_STRING:
                raise MalformedTermError(
                    "language-tagged literal must have datatype rdf:langString"
                )
        elif self.datatype == RDF_LANG_STRING:
            raise MalformedTermError("rdf:langString literal requires a language tag")
        if not self.datatype:
            raise MalformedTermError("literal requires exactly one datatype IRI")

    def __repr__(self) -> str:
        if self.lang is not None:
            return f'"{self.lexical}"@{self.lang}'
        if self.datatype == XSD_STRING:
            return f'"{self.lexical}"'
        return f'"{self.lexical}"^^<{self.datatype}>'


Term = Union[Iri, Blank, Literal]


def term_key(t: Term) -> tuple:
    """Total, deterministic ordering key over all terms."""
    if isinstance(t, Iri):
        return (0, t.value, "", "")
    if isinstance(t, Blank):
        return (1, t.label, "", "")
    return (2, t.lexical, t.datatype, t.lang or "")


@dataclass(frozen=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, Iri):
            raise MalformedTripleError(f"predicate must be an IRI: {self.predicate!r}")
        if isinstance(self.subject, Literal):
            raise MalformedTripleError(f"subject must not be a literal: {self.subject!r}")
        if not isinstance(self.subject, (Iri, Blank)):
            raise MalformedTripleError(f"subject must be an IRI or blank node: {self.subject!r}")
        if not isinstance(self.object, (Iri, Blank, Literal)):
            raise MalformedTripleError(f"object must be a term: {self.object!r}")

    def __repr__(self) -> str:
        return f"({self.subject!r} {self.predicate!r} {self.object!r})"


def triple_key(t: Triple) -> tuple:
    return (term_key(t.subject), term_key(t.predicate), term_key(t.object))


class Graph:
    """A set of triples with (S), (P,O) and (O) lookup indexes.

    Mutation is only allowed until `freeze()` is called; frozen graphs are
    immutable snapshots that are safe to share across threads. Equality is
    triple-set equality; the optional label is metadata and never compared.
    """

    __slots__ = ("_triples", "_by_s", "_by_po", "_by_o", "_frozen", "label")

    def __init__(self, triples: Iterable[Triple] = (), label: Optional[str] = None):
        self._triples: set[Triple] = set()
        self._by_s: dict[Term, set[Triple]] = {}
        self._by_po: dict[tuple[Term, Term], set[Triple]] = {}
        self._by_o: dict[Term, set[Triple]] = {}
        self._frozen = False
        self.label = label
        for t in triples:
            self.insert(t)

    # -- mutation -----------------------------------------------------------

    def insert(self, t: Triple) -> bool:
        """Add a triple; returns True iff it was not already present."""
        if self._frozen:
            raise FrozenGraphError("cannot insert into a frozen graph")
        if not isinstance(t, Triple):
            raise MalformedTripleError(f"not a triple: {t!r}")
        if t in self._triples:
            return False
        self._triples.add(t)
        self._by_s.setdefault(t.subject, set()).add(t)
        self._by_po.setdefault((t.predicate, t.object), set()).add(t)
        self._by_o.setdefault(t.object, set()).add(t)
        return True

    def remove(self, t: Triple) -> bool:
        """Remove a triple; returns True iff it was present."""
        if self._frozen:
            raise FrozenGraphError("cannot remove from a frozen graph")
        if t not in self._triples:
            return False
        self._triples.discard(t)
        for index, key in (
            (self._by_s, t.subject),
            (self._by_po, (t.predicate, t.object)),
            (self._by_o, t.object),
        ):
            bucket = index[key]
            bucket.discard(t)
            if not bucket:
                del index[key]
        return True

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # -- lookup -------------------------------------------------------------

    def __contains__(self, t: Triple) -> bool:
        return t in self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __bool__(self) -> bool:
        return bool(self._triples)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._triples == other._triples

    def __hash__(self):  # graphs are mutable until frozen
        raise TypeError("Graph is unhashable")

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"<Graph{tag} size={len(self)}{' frozen' if self._frozen else ''}>"

    def match(
        self,
        s: Optional[Term] = None,
        p: Optional[Term] = None,
        o: Optional[Term] = None,
    ) -> set[Triple]:
        """Triples matching all bound positions; None is a wildcard.

        Uses the most selective index available: (S) when the subject is
        bound, (P,O) when predicate and object are, (O) when only the object
        is. A predicate-only pattern falls back to a scan.
        """
        if s is not None:
            candidates = self._by_s.get(s, ())
        elif p is not None and o is not None:
            candidates = self._by_po.get((p, o), ())
        elif o is not None:
            candidates = self._by_o.get(o, ())
        else:
            candidates = self._triples
        return {
            t
            for t in candidates
            if (s is None or t.subject == s)
            and (p is None or t.predicate == p)
            and (o is None or t.object == o)
        }

    def terms(self) -> set[Term]:
        """Every term occurring in any position."""
        out: set[Term] = set()
        for t in self._triples:
            out.add(t.subject)
            out.add(t.predicate)
            out.add(t.object)
        return out

    def subjects(self) -> set[Term]:
        return set(self._by_s)

    def copy(self, label: Optional[str] = None) -> "Graph":
        """Unfrozen copy sharing no mutable state with the original."""
        return Graph(self._triples, label=label if label is not None else self.label)

    def sorted_triples(self) -> list[Triple]:
        return sorted(self._triples, key=triple_key)


def merge(*graphs: Graph) -> Graph:
    """Union of the given graphs' triple sets; inputs are left untouched.

    Blank node labels are document-scoped and shared on merge, so merging a
    graph with itself is the identity (the contract fixtures contain no
    blank nodes at all).
    """
    out = Graph()
    for g in graphs:
        for t in g:
            out.insert(t)
    return out
