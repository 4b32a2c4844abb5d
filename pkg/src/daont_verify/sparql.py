"""SPARQL subset: parsing and closed-world evaluation of basic graph
patterns with FILTER (NOT) EXISTS groups and =/!= comparisons.

Accepted queries: an optional PREFIX prologue, SELECT with an explicit
variable list, and a WHERE block of triple patterns (with "a", ";" and ","
abbreviations) interleaved with FILTER NOT EXISTS { ... },
FILTER EXISTS { ... } and FILTER(?v = term) / FILTER(?v != term).
Everything else (OPTIONAL, UNION, property paths, ORDER BY, DISTINCT, ...)
is rejected by name. The vocabulary prefixes (da, dpv, odrl, rdf, xsd) are
predeclared so rule queries can be written without a prologue; PREFIX
directives override them.

Evaluation is left-to-right nested-loop matching over the graph indexes
with set (deduplicated) solution semantics. A NOT EXISTS group keeps a
binding iff its patterns, with the binding's variables substituted, have no
match in the graph: the closed-world reading where a missing required fact
is a violation. Variables appearing only inside a group are existentially
scoped to it. Filters must come after the patterns that bind their
variables; anything else is a parse error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

from .rdf import (
    Blank,
    Graph,
    Iri,
    Literal,
    MalformedTripleError,
    Term,
    Triple,
    XSD_BOOLEAN,
    XSD_INTEGER,
    XSD_STRING,
    RDF_LANG_STRING,
    term_key,
)
from .turtle import ParseDiagnostic, ParseError, PrefixMap, _ABSOLUTE_IRI_RE
from .vocab import default_prefixes, RDF_TYPE


class EvaluationError(RuntimeError):
    """A filter referenced a variable with no binding at evaluation time."""


class GuardExceededError(RuntimeError):
    """Brute-force enumeration would exceed its assignment budget."""


class QueryAstError(ValueError):
    """A hand-built query AST violates a structural invariant."""


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Variable:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[Term, Variable]


@dataclass(frozen=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm

    def __post_init__(self) -> None:
        if not isinstance(self.predicate, (Variable, Iri)):
            raise QueryAstError(
                f"pattern predicate must be a variable or IRI: {self.predicate!r}"
            )

    def variables(self) -> set[str]:
        return {
            t.name
            for t in (self.subject, self.predicate, self.object)
            if isinstance(t, Variable)
        }


@dataclass(frozen=True)
class NotExistsGroup:
    patterns: tuple[TriplePattern, ...]

    def __post_init__(self) -> None:
        if not self.patterns:
            raise QueryAstError("NOT EXISTS group must contain at least one pattern")

    def variables(self) -> set[str]:
        return set().union(*(p.variables() for p in self.patterns))


@dataclass(frozen=True)
class ExistsGroup:
    patterns: tuple[TriplePattern, ...]

    def __post_init__(self) -> None:
        if not self.patterns:
            raise QueryAstError("EXISTS group must contain at least one pattern")

    def variables(self) -> set[str]:
        return set().union(*(p.variables() for p in self.patterns))


@dataclass(frozen=True)
class Comparison:
    var: str
    op: str  # "=" or "!="
    term: Term

    def __post_init__(self) -> None:
        if self.op not in ("=", "!="):
            raise QueryAstError(f"comparison operator must be = or !=: {self.op!r}")


BodyElement = Union[TriplePattern, NotExistsGroup, ExistsGroup, Comparison]


@dataclass
class Query:
    projected: tuple[str, ...]
    body: tuple[BodyElement, ...]
    prefixes: PrefixMap = field(default_factory=PrefixMap)

    def patterns(self) -> list[TriplePattern]:
        return [e for e in self.body if isinstance(e, TriplePattern)]

    def outer_variables(self) -> list[str]:
        """Variables of the outer patterns, in first-occurrence order."""
        seen: list[str] = []
        for p in self.patterns():
            for t in (p.subject, p.predicate, p.object):
                if isinstance(t, Variable) and t.name not in seen:
                    seen.append(t.name)
        return seen

    def validate(self) -> None:
        outer = set(self.outer_variables())
        for v in self.projected:
            if v not in outer:
                raise QueryAstError(
                    f"projected variable ?{v} does not occur in any triple pattern"
                )


@dataclass(frozen=True)
class Solution:
    """One result row: an immutable mapping from variable name to term."""

    bindings: tuple[tuple[str, Term], ...]

    @classmethod
    def of(cls, mapping: dict[str, Term]) -> "Solution":
        return cls(tuple(sorted(mapping.items())))

    def __getitem__(self, var: str) -> Term:
        for name, term in self.bindings:
            if name == var:
                return term
        raise KeyError(var)

    def __contains__(self, var: str) -> bool:
        return any(name == var for name, _ in self.bindings)

    def as_dict(self) -> dict[str, Term]:
        return dict(self.bindings)

    def variables(self) -> set[str]:
        return {name for name, _ in self.bindings}

    def sort_key(self) -> tuple:
        return tuple((name, term_key(term)) for name, term in self.bindings)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_KEYWORDS = {"SELECT", "WHERE", "FILTER", "NOT", "EXISTS", "PREFIX"}

# Out-of-subset SPARQL keywords, rejected with the construct's full name.
_REJECTED = {
    "OPTIONAL": "OPTIONAL",
    "UNION": "UNION",
    "ORDER": "ORDER BY",
    "GROUP": "GROUP BY",
    "HAVING": "HAVING",
    "DISTINCT": "DISTINCT",
    "REDUCED": "REDUCED",
    "LIMIT": "LIMIT",
    "OFFSET": "OFFSET",
    "BIND": "BIND",
    "VALUES": "VALUES",
    "MINUS": "MINUS",
    "SERVICE": "SERVICE",
    "GRAPH": "GRAPH",
    "ASK": "ASK",
    "CONSTRUCT": "CONSTRUCT",
    "DESCRIBE": "DESCRIBE",
    "BASE": "BASE",
}

_NAME_EXTRA = set("_-")


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c in _NAME_EXTRA


@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    line: int
    col: int
    lexeme: str = ""


class _QueryLexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _fail(self, message: str, lexeme: str = "") -> None:
        raise ParseError(ParseDiagnostic(self.line, self.col, message, lexeme))

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def _advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def tokens(self) -> list[_Tok]:
        out = []
        while True:
            self._skip()
            line, col = self.line, self.col
            if self.pos >= len(self.text):
                out.append(_Tok("EOF", None, line, col))
                return out
            out.append(self._token(line, col))

    def _skip(self) -> None:
        while self.pos < len(self.text):
            c = self._peek()
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _token(self, line: int, col: int) -> _Tok:
        c = self._peek()
        if c == "?" or c == "$":
            return self._variable(line, col)
        if c == "<":
            return self._iriref(line, col)
        if c == '"':
            return self._string(line, col)
        if c == "_" and self._peek(1) == ":":
            self._advance(); self._advance()
            label = self._scan_name()
            if not label:
                self._fail("blank node label must be non-empty", "_:")
            return _Tok("BLANK", label, line, col, "_:" + label)
        if c == "@":
            self._advance()
            tag = self._scan_name()
            return _Tok("LANGTAG", tag, line, col, "@" + tag)
        if c == "^":
            if self._peek(1) == "^":
                self._advance(); self._advance()
                return _Tok("CARETS", None, line, col)
            self._fail("unsupported construct: property path (inverse '^')", "^")
        if c in "{}(),;.":
            self._advance()
            kind = {"{": "LBRACE", "}": "RBRACE", "(": "LPAREN", ")": "RPAREN",
                    ",": "COMMA", ";": "SEMI", ".": "DOT"}[c]
            return _Tok(kind, None, line, col, c)
        if c == "=":
            self._advance()
            return _Tok("EQ", None, line, col, "=")
        if c == "!":
            if self._peek(1) == "=":
                self._advance(); self._advance()
                return _Tok("NEQ", None, line, col, "!=")
            self._fail("unsupported construct: '!' expression", "!")
        if c == "*":
            self._fail("unsupported construct: '*' (explicit variable list required; "
                       "property paths are outside the subset)", "*")
        if c == "/":
            self._fail("unsupported construct: property path (sequence '/')", "/")
        if c == "|":
            self._fail("unsupported construct: property path (alternative '|')", "|")
        if c.isdigit() or (c in "+-" and self._peek(1).isdigit()):
            chars = [self._advance()]
            while self._peek().isdigit():
                chars.append(self._advance())
            nxt = self._peek()
            if (nxt == "." and self._peek(1).isdigit()) or nxt in ("e", "E"):
                self._fail("unsupported construct: decimal/double literal",
                           "".join(chars) + nxt)
            return _Tok("INTEGER", "".join(chars), line, col, "".join(chars))
        if c == ":" or _is_name_char(c):
            return self._name(line, col)
        self._fail(f"unexpected character {c!r}", c)
        raise AssertionError

    def _variable(self, line: int, col: int) -> _Tok:
        sigil = self._advance()
        name = self._scan_name()
        if not name:
            self._fail("variable name must be non-empty", sigil)
        return _Tok("VAR", name, line, col, sigil + name)

    def _scan_name(self) -> str:
        chars = []
        while self.pos < len(self.text) and _is_name_char(self._peek()):
            chars.append(self._advance())
        return "".join(chars)

    def _scan_local(self) -> str:
        chars = []
        while self.pos < len(self.text):
            c = self._peek()
            if _is_name_char(c):
                chars.append(self._advance())
            elif c == "." and _is_name_char(self._peek(1)):
                chars.append(self._advance())
            else:
                break
        return "".join(chars)

    def _iriref(self, line: int, col: int) -> _Tok:
        self._advance()
        chars = []
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated IRI", "<" + "".join(chars))
            c = self._advance()
            if c == ">":
                return _Tok("IRIREF", "".join(chars), line, col,
                            "<" + "".join(chars) + ">")
            if c in '<"{}|^`\\' or ord(c) < 0x21:
                self._fail(f"invalid character {c!r} in IRI", c)
            chars.append(c)

    def _string(self, line: int, col: int) -> _Tok:
        self._advance()
        chars = []
        escapes = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "'": "'", "\\": "\\"}
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated string literal", "".join(chars))
            c = self._advance()
            if c == '"':
                return _Tok("STRING", "".join(chars), line, col)
            if c == "\\":
                e = self._advance() if self.pos < len(self.text) else ""
                if e not in escapes:
                    self._fail(f"unknown escape sequence \\{e}", "\\" + e)
                chars.append(escapes[e])
            else:
                chars.append(c)

    def _name(self, line: int, col: int) -> _Tok:
        chars = []
        while self.pos < len(self.text) and _is_name_char(self._peek()):
            chars.append(self._advance())
        name = "".join(chars)
        if self._peek() == ":":
            self._advance()
            local = self._scan_local()
            return _Tok("PNAME", (name, local), line, col, f"{name}:{local}")
        if name == "a":
            return _Tok("A", None, line, col, "a")
        if name in ("true", "false"):
            return _Tok("BOOLEAN", name, line, col, name)
        upper = name.upper()
        if upper in _REJECTED:
            self._fail(f"unsupported construct: {_REJECTED[upper]}", name)
        if upper in _KEYWORDS:
            return _Tok(upper, None, line, col, name)
        self._fail(f"unexpected token {name!r}", name)
        raise AssertionError


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _QueryParser:
    def __init__(self, tokens: list[_Tok], prefixes: PrefixMap):
        self.toks = tokens
        self.i = 0
        self.prefixes = prefixes

    def _fail(self, tok: _Tok, message: str) -> None:
        raise ParseError(ParseDiagnostic(tok.line, tok.col, message, tok.lexeme))

    def _peek(self) -> _Tok:
        return self.toks[self.i]

    def _take(self) -> _Tok:
        tok = self.toks[self.i]
        if tok.kind != "EOF":
            self.i += 1
        return tok

    def _expect(self, kind: str, what: str) -> _Tok:
        tok = self._take()
        if tok.kind != kind:
            self._fail(tok, f"expected {what}")
        return tok

    def parse(self) -> Query:
        while self._peek().kind == "PREFIX":
            self._take()
            name = self._expect("PNAME", "a prefix label ending in ':'")
            label, local = name.value
            if local:
                self._fail(name, "prefix declaration label must end at ':'")
            ns = self._expect("IRIREF", "a namespace IRI")
            if not _ABSOLUTE_IRI_RE.match(ns.value):
                self._fail(ns, f"namespace must be an absolute IRI: {ns.value!r}")
            self.prefixes.bind(label, ns.value)

        self._expect("SELECT", "SELECT")
        projected: list[str] = []
        select_toks: list[_Tok] = []
        while self._peek().kind == "VAR":
            tok = self._take()
            if tok.value in projected:
                self._fail(tok, f"duplicate projected variable ?{tok.value}")
            projected.append(tok.value)
            select_toks.append(tok)
        if not projected:
            self._fail(self._peek(), "SELECT requires an explicit variable list")

        self._expect("WHERE", "WHERE")
        self._expect("LBRACE", "'{'")
        body = self._body()
        self._expect("RBRACE", "'}'")
        tail = self._take()
        if tail.kind != "EOF":
            self._fail(tail, "unexpected input after the WHERE block")

        query = Query(tuple(projected), tuple(body), self.prefixes)
        outer = {v for p in query.patterns() for v in p.variables()}
        for tok in select_toks:
            if tok.value not in outer:
                self._fail(tok, f"projected variable ?{tok.value} does not "
                                "occur in any triple pattern")
        self._check_scopes(query)
        return query

    def _body(self) -> list[BodyElement]:
        out: list[BodyElement] = []
        self._elem_toks: list[_Tok] = []
        while True:
            tok = self._peek()
            if tok.kind == "RBRACE":
                return out
            if tok.kind == "FILTER":
                out.append(self._filter())
                self._elem_toks.append(tok)
            elif tok.kind == "EOF":
                self._fail(tok, "unterminated WHERE block")
            else:
                block = self._triple_block()
                out.extend(block)
                self._elem_toks.extend([tok] * len(block))

    def _filter(self) -> BodyElement:
        self._take()  # FILTER
        tok = self._peek()
        if tok.kind == "NOT":
            self._take()
            self._expect("EXISTS", "EXISTS after NOT")
            return NotExistsGroup(tuple(self._group()))
        if tok.kind == "EXISTS":
            self._take()
            return ExistsGroup(tuple(self._group()))
        if tok.kind == "LPAREN":
            self._take()
            var = self._expect("VAR", "a variable in the comparison")
            op_tok = self._take()
            if op_tok.kind == "EQ":
                op = "="
            elif op_tok.kind == "NEQ":
                op = "!="
            else:
                self._fail(op_tok, "expected '=' or '!=' in FILTER comparison")
            term = self._constant_term()
            self._expect("RPAREN", "')'")
            return Comparison(var.value, op, term)
        self._fail(tok, "expected NOT EXISTS, EXISTS or a (?var = term) comparison")
        raise AssertionError

    def _group(self) -> list[TriplePattern]:
        self._expect("LBRACE", "'{'")
        patterns: list[TriplePattern] = []
        while self._peek().kind not in ("RBRACE", "EOF"):
            if self._peek().kind == "FILTER":
                self._fail(self._peek(),
                           "nested FILTER inside an EXISTS group is outside the subset")
            patterns.extend(self._triple_block())
        self._expect("RBRACE", "'}' to close the group")
        if not patterns:
            self._fail(self._peek(), "EXISTS group must contain at least one pattern")
        return patterns

    def _triple_block(self) -> list[TriplePattern]:
        patterns: list[TriplePattern] = []
        subject = self._pattern_term(position="subject")
        while True:
            predicate = self._verb()
            while True:
                obj = self._pattern_term(position="object")
                patterns.append(TriplePattern(subject, predicate, obj))
                if self._peek().kind == "COMMA":
                    self._take()
                    continue
                break
            if self._peek().kind == "SEMI":
                while self._peek().kind == "SEMI":
                    self._take()
                if self._peek().kind in ("DOT", "RBRACE", "FILTER"):
                    break
                continue
            break
        if self._peek().kind == "DOT":
            self._take()
        return patterns

    def _verb(self) -> PatternTerm:
        tok = self._peek()
        if tok.kind == "A":
            self._take()
            return RDF_TYPE
        if tok.kind == "VAR":
            self._take()
            return Variable(tok.value)
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(self._take())
        self._fail(tok, "expected a predicate (IRI, variable or 'a')")
        raise AssertionError

    def _pattern_term(self, position: str) -> PatternTerm:
        tok = self._take()
        if tok.kind == "VAR":
            return Variable(tok.value)
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(tok)
        if tok.kind == "BLANK":
            return Blank(tok.value)
        if tok.kind in ("STRING", "BOOLEAN", "INTEGER"):
            if position == "subject":
                self._fail(tok, "subject must not be a literal")
            return self._literal(tok)
        self._fail(tok, f"expected a {position} term")
        raise AssertionError

    def _constant_term(self) -> Term:
        tok = self._take()
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(tok)
        if tok.kind in ("STRING", "BOOLEAN", "INTEGER"):
            return self._literal(tok)
        self._fail(tok, "expected a literal or IRI on the comparison's right side")
        raise AssertionError

    def _literal(self, tok: _Tok) -> Literal:
        if tok.kind == "BOOLEAN":
            return Literal(tok.value, XSD_BOOLEAN)
        if tok.kind == "INTEGER":
            return Literal(tok.value, XSD_INTEGER)
        nxt = self._peek()
        if nxt.kind == "LANGTAG":
            self._take()
            return Literal(tok.value, RDF_LANG_STRING, nxt.value)
        if nxt.kind == "CARETS":
            self._take()
            dt_tok = self._take()
            if dt_tok.kind not in ("IRIREF", "PNAME"):
                self._fail(dt_tok, "expected a datatype IRI after '^^'")
            return Literal(tok.value, self._iri_term(dt_tok).value)
        return Literal(tok.value, XSD_STRING)

    def _iri_term(self, tok: _Tok) -> Iri:
        if tok.kind == "IRIREF":
            if not _ABSOLUTE_IRI_RE.match(tok.value):
                self._fail(tok, f"relative IRIs are not supported: {tok.value!r}")
            return Iri(tok.value)
        label, local = tok.value
        if not local:
            self._fail(tok, f"prefixed name {tok.lexeme!r} is missing its local part")
        expanded = self.prefixes.expand(label, local)
        if expanded is None:
            self._fail(tok, f"unknown prefix {label + ':'!r}")
        return Iri(expanded)

    def _check_scopes(self, query: Query) -> None:
        """Filters may only use variables bound by patterns before them."""
        seen: set[str] = set()
        for idx, elem in enumerate(query.body):
            if isinstance(elem, TriplePattern):
                seen |= elem.variables()
                continue
            later: set[str] = set()
            for rest in query.body[idx + 1:]:
                if isinstance(rest, TriplePattern):
                    later |= rest.variables()
            tok = self._elem_toks[idx]
            if isinstance(elem, Comparison):
                if elem.var not in seen:
                    raise ParseError(ParseDiagnostic(
                        tok.line, tok.col,
                        f"filter references ?{elem.var} before any pattern binds it",
                        f"?{elem.var}"))
            else:
                for v in sorted(elem.variables()):
                    if v not in seen and v in later:
                        raise ParseError(ParseDiagnostic(
                            tok.line, tok.col,
                            f"group references ?{v}, which is bound only by later "
                            "patterns", f"?{v}"))


def parse_query(text: str, prefixes: PrefixMap | None = None) -> Query:
    """Parse a SPARQL-subset query; raises ParseError outside the subset."""
    env = prefixes.copy() if prefixes is not None else default_prefixes()
    return _QueryParser(_QueryLexer(text).tokens(), env).parse()


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _match_pattern(graph: Graph, pattern: TriplePattern,
                   binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
    """Extend one binding against the graph via the most selective index."""

    def bound(t: PatternTerm) -> Term | None:
        if isinstance(t, Variable):
            return binding.get(t.name)
        return t

    for t in graph.match(bound(pattern.subject), bound(pattern.predicate),
                         bound(pattern.object)):
        extended = dict(binding)
        ok = True
        for actual, pat in ((t.subject, pattern.subject),
                            (t.predicate, pattern.predicate),
                            (t.object, pattern.object)):
            if isinstance(pat, Variable):
                prior = extended.get(pat.name)
                if prior is None:
                    extended[pat.name] = actual
                elif prior != actual:
                    ok = False
                    break
        if ok:
            yield extended


def _group_matches(graph: Graph, patterns: Iterable[TriplePattern],
                   binding: dict[str, Term]) -> bool:
    """True iff the group's patterns have at least one match under the
    binding; group-only variables range existentially."""
    stack = [binding]
    for pattern in patterns:
        stack = [ext for b in stack for ext in _match_pattern(graph, pattern, b)]
        if not stack:
            return False
    return True


def evaluate(graph: Graph, query: Query) -> set[Solution]:
    """Evaluate left to right: patterns extend bindings, NOT EXISTS keeps a
    binding iff its group has zero matches (closed world), EXISTS the
    converse, comparisons test lexical term equality. Returns deduplicated
    solutions projected to the SELECT variables."""
    query.validate()
    bindings: list[dict[str, Term]] = [{}]
    for elem in query.body:
        if isinstance(elem, TriplePattern):
            bindings = [ext for b in bindings
                        for ext in _match_pattern(graph, elem, b)]
        elif isinstance(elem, NotExistsGroup):
            bindings = [b for b in bindings
                        if not _group_matches(graph, elem.patterns, b)]
        elif isinstance(elem, ExistsGroup):
            bindings = [b for b in bindings
                        if _group_matches(graph, elem.patterns, b)]
        else:
            kept = []
            for b in bindings:
                if elem.var not in b:
                    raise EvaluationError(
                        f"comparison references unbound variable ?{elem.var}")
                if (b[elem.var] == elem.term) == (elem.op == "="):
                    kept.append(b)
            bindings = kept
        if not bindings:
            return set()
    return {Solution.of({v: b[v] for v in query.projected}) for b in bindings}


def brute_force_evaluate(graph: Graph, query: Query,
                         budget: int = 10_000) -> set[Solution]:
    """Definitional oracle for `evaluate`: enumerates total assignments of
    the outer variables over the graph's terms, checking every pattern by
    triple-set membership and every filter by definition (group-only
    variables enumerated existentially).

    The enumeration prunes assignments that already falsify a fully
    instantiated pattern, and counts every attempted variable assignment
    against `budget`; exceeding it raises GuardExceededError rather than
    grinding on. Results equal `evaluate` on every accepted query.
    """
    query.validate()
    outer_vars = query.outer_variables()
    terms = sorted(graph.terms(), key=term_key)
    patterns = query.patterns()

    # Filters keep the variable scope they had at their textual position.
    filters: list[tuple[BodyElement, set[str]]] = []
    seen: set[str] = set()
    for elem in query.body:
        if isinstance(elem, TriplePattern):
            seen |= elem.variables()
        else:
            filters.append((elem, set(seen)))

    # Patterns become checkable once all their variables are assigned.
    level_of = {v: i for i, v in enumerate(outer_vars)}
    ready_at: list[list[TriplePattern]] = [[] for _ in range(len(outer_vars) + 1)]
    for p in patterns:
        vs = p.variables()
        level = max((level_of[v] + 1 for v in vs), default=0)
        ready_at[level].append(p)

    spent = 0

    def tick() -> None:
        nonlocal spent
        spent += 1
        if spent > budget:
            raise GuardExceededError(
                f"brute-force enumeration exceeded {budget} candidate assignments")

    def instantiate(t: PatternTerm, env: dict[str, Term]) -> Term:
        return env[t.name] if isinstance(t, Variable) else t

    def holds(p: TriplePattern, env: dict[str, Term]) -> bool:
        try:
            t = Triple(instantiate(p.subject, env), instantiate(p.predicate, env),
                       instantiate(p.object, env))
        except MalformedTripleError:
            return False  # no well-formed triple can match this assignment
        return t in graph

    def group_holds(group_patterns: tuple[TriplePattern, ...],
                    visible: dict[str, Term]) -> bool:
        fresh = sorted({v for p in group_patterns for v in p.variables()
                        if v not in visible})

        def rec(j: int, env: dict[str, Term]) -> bool:
            if j == len(fresh):
                return all(holds(p, env) for p in group_patterns)
            for t in terms:
                tick()
                env[fresh[j]] = t
                if rec(j + 1, env):
                    del env[fresh[j]]
                    return True
                del env[fresh[j]]
            return False

        return rec(0, dict(visible))

    solutions: set[Solution] = set()

    def check_filters(env: dict[str, Term]) -> bool:
        for elem, scope in filters:
            visible = {v: env[v] for v in scope}
            if isinstance(elem, Comparison):
                if elem.var not in visible:
                    raise EvaluationError(
                        f"comparison references unbound variable ?{elem.var}")
                if (visible[elem.var] == elem.term) != (elem.op == "="):
                    return False
            elif isinstance(elem, NotExistsGroup):
                if group_holds(elem.patterns, visible):
                    return False
            else:
                if not group_holds(elem.patterns, visible):
                    return False
        return True

    def assign(level: int, env: dict[str, Term]) -> None:
        if level == len(outer_vars):
            if check_filters(env):
                solutions.add(Solution.of({v: env[v] for v in query.projected}))
            return
        var = outer_vars[level]
        for t in terms:
            tick()
            env[var] = t
            if all(holds(p, env) for p in ready_at[level + 1]):
                assign(level + 1, env)
            del env[var]

    # Constant-only patterns are checkable with nothing assigned.
    if all(holds(p, {}) for p in ready_at[0]):
        assign(0, {})
    return solutions
