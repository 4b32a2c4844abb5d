"""Turtle subset parser and serializer for the contract fixtures and schema.

Supported surface: @prefix/PREFIX and @base/BASE directives, prefixed names,
absolute IRIs in angle brackets, the "a" keyword, ";" predicate lists, ","
object lists, plain / typed / language-tagged literals, boolean and integer
shorthand, "#" comments and labelled blank nodes ("_:x").

Collections "( )" and anonymous blank node property lists "[ ]" are outside
the subset and are rejected with a named unsupported-construct diagnostic,
never silently mis-parsed. The first syntax error aborts the parse.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from urllib.parse import urljoin

from .rdf import (
    RDF_NS,
    RDF_LANG_STRING,
    XSD_BOOLEAN,
    XSD_INTEGER,
    XSD_STRING,
    Blank,
    Graph,
    Iri,
    Literal,
    Term,
    Triple,
    term_key,
)

RDF_TYPE = Iri(RDF_NS + "type")

_ABSOLUTE_IRI_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_INTEGER_RE = re.compile(r"^[+-]?[0-9]+$")
_LANGTAG_RE = re.compile(r"^[A-Za-z]+(-[A-Za-z0-9]+)*$")
# Local parts we are willing to emit in prefixed form when serializing.
_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.\-]*$")


@dataclass(frozen=True)
class ParseDiagnostic:
    """Position and description of the first syntax error in an input."""

    line: int
    column: int
    message: str
    lexeme: str = ""

    def __str__(self) -> str:
        where = f"line {self.line}, column {self.column}"
        if self.lexeme:
            return f"{where}: {self.message} (at {self.lexeme!r})"
        return f"{where}: {self.message}"


class ParseError(Exception):
    """Raised with the diagnostic for the first error encountered."""

    def __init__(self, diagnostic: ParseDiagnostic, source_index: int | None = None):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic
        self.source_index = source_index

    @property
    def line(self) -> int:
        return self.diagnostic.line

    @property
    def column(self) -> int:
        return self.diagnostic.column


@dataclass
class PrefixMap:
    """Prefix-label to namespace bindings plus an optional base IRI.

    Relabeling a prefix replaces the earlier binding (last declaration wins).
    The empty label is the default prefix (":name").
    """

    bindings: dict[str, str] = field(default_factory=dict)
    base: str | None = None

    def bind(self, label: str, namespace: str) -> None:
        if not _ABSOLUTE_IRI_RE.match(namespace):
            raise ValueError(f"namespace must be an absolute IRI: {namespace!r}")
        self.bindings[label] = namespace

    def expand(self, label: str, local: str) -> str | None:
        ns = self.bindings.get(label)
        return None if ns is None else ns + local

    def compact(self, iri: str) -> tuple[str, str] | None:
        """Longest-namespace match yielding a safely re-parseable local part."""
        best: tuple[str, str] | None = None
        for label, ns in sorted(self.bindings.items()):
            if iri.startswith(ns):
                local = iri[len(ns):]
                if not _SAFE_LOCAL_RE.match(local) or local.endswith("."):
                    continue
                if best is None or len(ns) > len(self.bindings[best[0]]):
                    best = (label, local)
        return best

    def copy(self) -> "PrefixMap":
        return PrefixMap(dict(self.bindings), self.base)


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

# Token kinds: IRIREF PNAME BLANK STRING LANGTAG CARETS A DOT SEMI COMMA
# PREFIX BASE BOOLEAN INTEGER EOF
@dataclass(frozen=True)
class _Tok:
    kind: str
    value: object
    line: int
    col: int
    lexeme: str = ""


_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}

_NAME_CHARS = set("_-")


def _is_name_char(c: str) -> bool:
    return c.isalnum() or c in _NAME_CHARS


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _fail(self, message: str, lexeme: str = "", line: int | None = None,
              col: int | None = None) -> None:
        raise ParseError(ParseDiagnostic(
            line if line is not None else self.line,
            col if col is not None else self.col,
            message,
            lexeme,
        ))

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

    def _skip_ws_and_comments(self) -> None:
        while self.pos < len(self.text):
            c = self._peek()
            if c in " \t\r\n":
                self._advance()
            elif c == "#":
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                return

    def tokens(self) -> list[_Tok]:
        out = []
        while True:
            tok = self._next()
            out.append(tok)
            if tok.kind == "EOF":
                return out

    def _next(self) -> _Tok:
        self._skip_ws_and_comments()
        line, col = self.line, self.col
        if self.pos >= len(self.text):
            return _Tok("EOF", None, line, col)
        c = self._peek()

        if c == "<":
            return self._iriref(line, col)
        if c == '"':
            return self._string(line, col)
        if c == "_" and self._peek(1) == ":":
            return self._blank(line, col)
        if c == "@":
            return self._at_word(line, col)
        if c == "^":
            if self._peek(1) == "^":
                self._advance(); self._advance()
                return _Tok("CARETS", None, line, col)
            self._fail("expected '^^'", "^", line, col)
        if c == ".":
            self._advance()
            return _Tok("DOT", None, line, col)
        if c == ";":
            self._advance()
            return _Tok("SEMI", None, line, col)
        if c == ",":
            self._advance()
            return _Tok("COMMA", None, line, col)
        if c == "[" or c == "]":
            self._fail("unsupported construct: anonymous blank node property list", c,
                       line, col)
        if c == "(" or c == ")":
            self._fail("unsupported construct: collection", c, line, col)
        if c.isdigit() or (c in "+-" and self._peek(1).isdigit()):
            return self._number(line, col)
        if c == ":" or _is_name_char(c):
            return self._name_or_pname(line, col)
        self._fail(f"unexpected character {c!r}", c, line, col)
        raise AssertionError  # unreachable

    def _iriref(self, line: int, col: int) -> _Tok:
        self._advance()  # '<'
        chars = []
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated IRI", "<" + "".join(chars), line, col)
            c = self._advance()
            if c == ">":
                return _Tok("IRIREF", "".join(chars), line, col, "<" + "".join(chars) + ">")
            if c in '<"{}|^`\\' or c == " " or ord(c) < 0x21:
                self._fail(f"invalid character {c!r} in IRI", c, line, col)
            chars.append(c)

    def _string(self, line: int, col: int) -> _Tok:
        if self.text[self.pos:self.pos + 3] == '"""':
            self._fail("unsupported construct: long string literal", '"""', line, col)
        self._advance()  # opening quote
        chars = []
        while True:
            if self.pos >= len(self.text):
                self._fail("unterminated string literal", "".join(chars), line, col)
            c = self._advance()
            if c == '"':
                return _Tok("STRING", "".join(chars), line, col)
            if c == "\n":
                self._fail("newline inside string literal", "".join(chars), line, col)
            if c == "\\":
                chars.append(self._escape(line, col))
            else:
                chars.append(c)

    def _escape(self, line: int, col: int) -> str:
        if self.pos >= len(self.text):
            self._fail("dangling escape at end of input", "\\", line, col)
        e = self._advance()
        if e in _ESCAPES:
            return _ESCAPES[e]
        if e in "uU":
            width = 4 if e == "u" else 8
            digits = self.text[self.pos:self.pos + width]
            if len(digits) < width or any(d not in "0123456789abcdefABCDEF" for d in digits):
                self._fail(f"invalid \\{e} escape", digits, line, col)
            for _ in range(width):
                self._advance()
            return chr(int(digits, 16))
        self._fail(f"unknown escape sequence \\{e}", "\\" + e, line, col)
        raise AssertionError

    def _blank(self, line: int, col: int) -> _Tok:
        self._advance(); self._advance()  # '_:'
        label = self._scan_local()
        if not label:
            self._fail("blank node label must be non-empty", "_:", line, col)
        return _Tok("BLANK", label, line, col, "_:" + label)

    def _at_word(self, line: int, col: int) -> _Tok:
        self._advance()  # '@'
        word = []
        while self.pos < len(self.text) and (self._peek().isalnum() or self._peek() == "-"):
            word.append(self._advance())
        w = "".join(word)
        if w == "prefix":
            return _Tok("PREFIX", "@prefix", line, col, "@prefix")
        if w == "base":
            return _Tok("BASE", "@base", line, col, "@base")
        if _LANGTAG_RE.match(w):
            return _Tok("LANGTAG", w, line, col, "@" + w)
        self._fail(f"malformed language tag or directive @{w}", "@" + w, line, col)
        raise AssertionError

    def _number(self, line: int, col: int) -> _Tok:
        chars = [self._advance()]
        while self.pos < len(self.text) and self._peek().isdigit():
            chars.append(self._advance())
        nxt = self._peek()
        if (nxt == "." and self._peek(1).isdigit()) or nxt in ("e", "E"):
            self._fail("unsupported construct: decimal/double literal",
                       "".join(chars) + nxt, line, col)
        return _Tok("INTEGER", "".join(chars), line, col, "".join(chars))

    def _scan_local(self) -> str:
        # Local names may contain internal dots, but a trailing dot is the
        # statement terminator, not part of the name.
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

    def _name_or_pname(self, line: int, col: int) -> _Tok:
        prefix = []
        while self.pos < len(self.text) and _is_name_char(self._peek()):
            prefix.append(self._advance())
        name = "".join(prefix)
        if self._peek() == ":":
            self._advance()
            local = self._scan_local()
            lexeme = f"{name}:{local}"
            return _Tok("PNAME", (name, local), line, col, lexeme)
        if name == "a":
            return _Tok("A", None, line, col, "a")
        if name in ("true", "false"):
            return _Tok("BOOLEAN", name, line, col, name)
        if name.upper() == "PREFIX":
            return _Tok("PREFIX", "PREFIX", line, col, name)
        if name.upper() == "BASE":
            return _Tok("BASE", "BASE", line, col, name)
        self._fail(f"unexpected token {name!r}", name, line, col)
        raise AssertionError


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
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

    def parse(self) -> Graph:
        g = Graph()
        while self._peek().kind != "EOF":
            tok = self._peek()
            if tok.kind == "PREFIX":
                self._directive_prefix()
            elif tok.kind == "BASE":
                self._directive_base()
            else:
                self._triples(g)
        return g

    def _directive_prefix(self) -> None:
        kw = self._take()
        name = self._expect("PNAME", "a prefix label ending in ':'")
        label, local = name.value
        if local:
            self._fail(name, "prefix declaration label must end at ':'")
        ns = self._expect("IRIREF", "a namespace IRI")
        namespace = self._resolve_iri(ns)
        try:
            self.prefixes.bind(label, namespace)
        except ValueError as exc:
            self._fail(ns, str(exc))
        if kw.value == "@prefix":
            self._expect("DOT", "'.' after @prefix directive")

    def _directive_base(self) -> None:
        kw = self._take()
        ns = self._expect("IRIREF", "a base IRI")
        base = self._resolve_iri(ns)
        self.prefixes.base = base
        if kw.value == "@base":
            self._expect("DOT", "'.' after @base directive")

    def _resolve_iri(self, tok: _Tok) -> str:
        text = tok.value
        if _ABSOLUTE_IRI_RE.match(text):
            return text
        if self.prefixes.base is None:
            self._fail(tok, f"relative IRI {text!r} without a base")
        return urljoin(self.prefixes.base, text)

    def _iri_term(self, tok: _Tok) -> Iri:
        if tok.kind == "IRIREF":
            return Iri(self._resolve_iri(tok))
        label, local = tok.value
        if not local:
            self._fail(tok, f"prefixed name {tok.lexeme!r} is missing its local part")
        expanded = self.prefixes.expand(label, local)
        if expanded is None:
            self._fail(tok, f"unknown prefix {label + ':'!r}")
        return Iri(expanded)

    def _subject(self) -> Term:
        tok = self._take()
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(tok)
        if tok.kind == "BLANK":
            return Blank(tok.value)
        if tok.kind in ("STRING", "BOOLEAN", "INTEGER"):
            self._fail(tok, "subject must be an IRI or blank node, not a literal")
        self._fail(tok, "expected a subject")
        raise AssertionError

    def _verb(self) -> Iri:
        tok = self._take()
        if tok.kind == "A":
            return RDF_TYPE
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(tok)
        self._fail(tok, "expected a predicate IRI or 'a'")
        raise AssertionError

    def _object(self) -> Term:
        tok = self._take()
        if tok.kind in ("IRIREF", "PNAME"):
            return self._iri_term(tok)
        if tok.kind == "BLANK":
            return Blank(tok.value)
        if tok.kind == "BOOLEAN":
            return Literal(tok.value, XSD_BOOLEAN)
        if tok.kind == "INTEGER":
            return Literal(tok.value, XSD_INTEGER)
        if tok.kind == "STRING":
            nxt = self._peek()
            if nxt.kind == "LANGTAG":
                self._take()
                return Literal(tok.value, RDF_LANG_STRING, nxt.value)
            if nxt.kind == "CARETS":
                self._take()
                dt_tok = self._take()
                if dt_tok.kind not in ("IRIREF", "PNAME"):
                    self._fail(dt_tok, "expected a datatype IRI after '^^'")
                dt = self._iri_term(dt_tok)
                if dt.value == RDF_LANG_STRING:
                    self._fail(dt_tok, "rdf:langString literals need a language tag")
                return Literal(tok.value, dt.value)
            return Literal(tok.value, XSD_STRING)
        self._fail(tok, "expected an object term")
        raise AssertionError

    def _triples(self, g: Graph) -> None:
        subject = self._subject()
        while True:
            predicate = self._verb()
            while True:
                obj = self._object()
                g.insert(Triple(subject, predicate, obj))
                if self._peek().kind == "COMMA":
                    self._take()
                    continue
                break
            if self._peek().kind == "SEMI":
                while self._peek().kind == "SEMI":  # Turtle allows ';' runs
                    self._take()
                if self._peek().kind == "DOT":
                    break
                continue
            break
        self._expect("DOT", "'.' to end the statement")


def parse_turtle(text: str, base: str | None = None,
                 prefixes: PrefixMap | None = None) -> Graph:
    """Parse a Turtle document into a Graph.

    Raises ParseError carrying a ParseDiagnostic on the first syntax error.
    When a PrefixMap is supplied it seeds the prefix environment and is
    updated in place with the document's own directives, so callers can keep
    a running prefix environment across documents.
    """
    env = prefixes if prefixes is not None else PrefixMap()
    if base is not None:
        env.base = base
    return _Parser(_Lexer(text).tokens(), env).parse()


# ---------------------------------------------------------------------------
# Serializer
# ---------------------------------------------------------------------------

_LITERAL_ESCAPES = {"\\": "\\\\", '"': '\\"', "\n": "\\n", "\r": "\\r", "\t": "\\t"}


def _escape_literal(text: str) -> str:
    return "".join(_LITERAL_ESCAPES.get(c, c) for c in text)


def _render_iri(iri: Iri, prefixes: PrefixMap, as_predicate: bool = False) -> str:
    if as_predicate and iri == RDF_TYPE:
        return "a"
    compacted = prefixes.compact(iri.value)
    if compacted is not None:
        label, local = compacted
        return f"{label}:{local}"
    return f"<{iri.value}>"


def _render_term(t: Term, prefixes: PrefixMap, as_predicate: bool = False) -> str:
    if isinstance(t, Iri):
        return _render_iri(t, prefixes, as_predicate)
    if isinstance(t, Blank):
        return f"_:{t.label}"
    if t.lang is not None:
        return f'"{_escape_literal(t.lexical)}"@{t.lang}'
    if t.datatype == XSD_BOOLEAN and t.lexical in ("true", "false"):
        return t.lexical
    if t.datatype == XSD_INTEGER and _INTEGER_RE.match(t.lexical):
        return t.lexical
    if t.datatype == XSD_STRING:
        return f'"{_escape_literal(t.lexical)}"'
    return f'"{_escape_literal(t.lexical)}"^^{_render_iri(Iri(t.datatype), prefixes)}'


def serialize_turtle(graph: Graph, prefixes: PrefixMap | None = None) -> str:
    """Serialize a graph deterministically: prefix directives first, then
    triples grouped by subject, everything sorted by lexical term order.

    Output re-parses to an equal graph for ground graphs; lexical forms are
    emitted exactly as stored.
    """
    env = prefixes if prefixes is not None else PrefixMap()
    lines = [f"@prefix {label}: <{ns}> ." for label, ns in sorted(env.bindings.items())]
    if lines:
        lines.append("")
    by_subject: dict[Term, list[Triple]] = {}
    for t in graph:
        by_subject.setdefault(t.subject, []).append(t)
    for subject in sorted(by_subject, key=term_key):
        triples = sorted(by_subject[subject],
                         key=lambda t: (term_key(t.predicate), term_key(t.object)))
        subj_text = _render_term(subject, env)
        parts = [
            f"{_render_term(t.predicate, env, as_predicate=True)} "
            f"{_render_term(t.object, env)}"
            for t in triples
        ]
        indent = " " * 4
        body = f" ;\n{indent}".join(parts)
        lines.append(f"{subj_text} {body} .")
    return "\n".join(lines) + ("\n" if lines else "")
