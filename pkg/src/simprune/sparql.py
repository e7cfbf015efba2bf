"""Parser and AST for the supported SPARQL fragment.

Accepted queries are ``PREFIX`` declarations followed by
``SELECT * WHERE { ... }`` where the group may contain triple patterns,
nested groups (juxtaposition means AND), ``OPTIONAL { ... }`` and
``{ ... } UNION { ... }``.  Inside a group, elements fold to the left, so
``A OPTIONAL {B} C`` reads as ``(A OPT B) AND C``.

Predicates must be constants.  FILTER, BIND, property paths, projections,
solution modifiers and blank nodes in patterns are rejected with
:class:`~simprune.errors.UnsupportedFeature`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Union as _TypingUnion

from .errors import ParseError, UnsupportedFeature
from .graphstore import canonical_literal, escape_literal

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
XSD = "http://www.w3.org/2001/XMLSchema#"


@dataclass(frozen=True, order=True)
class Var:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


@dataclass(frozen=True, order=True)
class Const:
    """A constant node in canonical N-Triples spelling."""

    term: str

    def __str__(self) -> str:
        return self.term


Term = _TypingUnion[Var, Const]


@dataclass(frozen=True)
class TriplePattern:
    subject: Term
    predicate: str
    object: Term

    def variables(self) -> set[str]:
        return {t.name for t in (self.subject, self.object) if isinstance(t, Var)}

    def __str__(self) -> str:
        return f"{self.subject} <{self.predicate}> {self.object} ."


@dataclass(frozen=True)
class Bgp:
    triples: tuple[TriplePattern, ...]
    qid: int = field(default=0)


@dataclass(frozen=True)
class And:
    left: "Query"
    right: "Query"
    qid: int = field(default=0)


@dataclass(frozen=True)
class Union:
    left: "Query"
    right: "Query"
    qid: int = field(default=0)


@dataclass(frozen=True)
class Optional:
    left: "Query"
    right: "Query"
    qid: int = field(default=0)


Query = _TypingUnion[Bgp, And, Union, Optional]
_Binary = (And, Union, Optional)


def number(ast: Query) -> Query:
    """Reassign subquery ids in pre-order, starting at 0."""
    counter = itertools.count()

    def go(node: Query) -> Query:
        qid = next(counter)
        if isinstance(node, Bgp):
            return replace(node, qid=qid)
        left = go(node.left)
        right = go(node.right)
        return type(node)(left, right, qid)

    return go(ast)


def subqueries(ast: Query) -> Iterator[Query]:
    """Pre-order traversal."""
    yield ast
    if isinstance(ast, _Binary):
        yield from subqueries(ast.left)
        yield from subqueries(ast.right)


def triple_patterns(ast: Query) -> Iterator[TriplePattern]:
    for node in subqueries(ast):
        if isinstance(node, Bgp):
            yield from node.triples


def variables(ast: Query) -> set[str]:
    out: set[str] = set()
    for t in triple_patterns(ast):
        out |= t.variables()
    return out


def mand(ast: Query) -> set[str]:
    """Variables occurring mandatorily in a union-free query."""
    if isinstance(ast, Bgp):
        return variables(ast)
    if isinstance(ast, And):
        return mand(ast.left) | mand(ast.right)
    if isinstance(ast, Optional):
        return mand(ast.left)
    raise ValueError("mand is defined for union-free queries only")


def well_designed(ast: Query) -> bool:
    """Check that every optional-side variable used outside its OPTIONAL also occurs on the left.

    Diagnostic only; solving does not depend on it.
    """
    occurrences: dict[str, int] = {}
    for t in triple_patterns(ast):
        for v in t.variables():
            occurrences[v] = occurrences.get(v, 0) + 1

    for node in subqueries(ast):
        if isinstance(node, Union):
            raise ValueError("well_designed is defined for union-free queries only")
        if not isinstance(node, Optional):
            continue
        inside: dict[str, int] = {}
        for t in triple_patterns(node):
            for v in t.variables():
                inside[v] = inside.get(v, 0) + 1
        left_vars = variables(node.left)
        for v in variables(node.right):
            if occurrences[v] > inside[v] and v not in left_vars:
                return False
    return True


def to_union_free(ast: Query) -> list[Query]:
    """Rewrite into union-free branches whose match sets together cover ``ast``.

    UNION is pushed out of AND and out of the left side of OPTIONAL exactly.
    A UNION on the right side of an OPTIONAL is split as well, which can only
    add matches (``A OPT (B ∪ C)`` ⊆ ``(A OPT B) ∪ (A OPT C)``); this keeps
    pruning sound.
    """

    def go(node: Query) -> list[Query]:
        if isinstance(node, Bgp):
            return [node]
        if isinstance(node, Union):
            return go(node.left) + go(node.right)
        lefts, rights = go(node.left), go(node.right)
        return [type(node)(a, b) for a in lefts for b in rights]

    return [number(q) for q in go(ast)]


def has_union_under_optional_right(ast: Query) -> bool:
    return any(
        isinstance(node, Optional) and any(isinstance(n, Union) for n in subqueries(node.right))
        for node in subqueries(ast)
    )


# --------------------------------------------------------------------------- printing


def to_sparql(ast: Query) -> str:
    """Render ``ast`` so that :func:`parse_query` rebuilds the same tree."""

    def group(node: Query) -> str:
        if isinstance(node, Bgp):
            return "{ " + " ".join(str(t) for t in node.triples) + (" }" if node.triples else "}")
        op = {And: " ", Union: " UNION ", Optional: " OPTIONAL "}[type(node)]
        return "{ " + group(node.left) + op + group(node.right) + " }"

    return "SELECT * WHERE " + group(ast)


# --------------------------------------------------------------------------- lexing

_UNSUPPORTED_KEYWORDS = {
    "FILTER", "BIND", "VALUES", "MINUS", "GRAPH", "SERVICE", "EXISTS", "NOT",
    "ORDER", "LIMIT", "OFFSET", "GROUP", "HAVING", "DISTINCT", "REDUCED",
    "CONSTRUCT", "ASK", "DESCRIBE", "FROM", "NAMED", "BASE", "INSERT", "DELETE",
    "LOAD", "CLEAR", "CREATE", "DROP", "WITH", "USING", "AS",
}
_KEYWORDS = {"PREFIX", "SELECT", "WHERE", "OPTIONAL", "UNION"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\x00-\x20]*>)
  | (?P<var>[?$][A-Za-z0-9_·À-￿]+)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*"|'(?:[^'\\\n\r]|\\.)*')
  | (?P<lang>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
  | (?P<dtmark>\^\^)
  | (?P<bnode>_:[A-Za-z0-9_\-.]*|\[)
  | (?P<number>[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<pname>(?:[A-Za-z][A-Za-z0-9_\-.]*)?:(?:[A-Za-z0-9_\-:%.])*)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[{}.;,*()])
  | (?P<path>[/|^+!])
  | (?P<other>\S)
    """,
    re.X,
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        kind = m.lastgroup
        tok = m.group()
        if kind == "pname" and tok.endswith(".") and not tok.endswith(":."):
            # local names cannot end in '.', so it is the statement terminator
            stripped = tok.rstrip(".")
            toks.append(_Tok("pname", stripped, pos))
            for k in range(len(stripped), len(tok)):
                toks.append(_Tok("punct", ".", pos + k))
        elif kind == "number" and tok.endswith(".") and not re.fullmatch(r"[+-]?\d+\.\d+", tok):
            toks.append(_Tok("number", tok[:-1], pos))
            toks.append(_Tok("punct", ".", pos + len(tok) - 1))
        elif kind != "ws":
            toks.append(_Tok(kind, tok, pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


# --------------------------------------------------------------------------- parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.prefixes: dict[str, str] = {}

    # helpers
    def peek(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Tok | None = None) -> ParseError:
        tok = tok or self.peek()
        return ParseError(message, *_position(self.text, tok.pos))

    def keyword(self, tok: _Tok) -> str | None:
        return tok.text.upper() if tok.kind == "word" else None

    def check_unsupported(self, tok: _Tok) -> None:
        kw = self.keyword(tok)
        if kw in _UNSUPPORTED_KEYWORDS:
            raise UnsupportedFeature(kw, "at line {}, column {}".format(*_position(self.text, tok.pos)))
        if tok.kind == "bnode":
            raise UnsupportedFeature("blank nodes in patterns")
        if tok.kind == "path":
            raise UnsupportedFeature("property paths")

    def expect_punct(self, ch: str) -> _Tok:
        tok = self.advance()
        if tok.kind != "punct" or tok.text != ch:
            self.check_unsupported(tok)
            raise self.error(f"expected {ch!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def is_punct(self, ch: str) -> bool:
        tok = self.peek()
        return tok.kind == "punct" and tok.text == ch

    # grammar
    def query(self) -> Query:
        while self.keyword(self.peek()) == "PREFIX":
            self.advance()
            name = self.advance()
            if name.kind != "pname" or not name.text.endswith(":"):
                raise self.error("expected prefix name ending in ':'", name)
            iri = self.advance()
            if iri.kind != "iri":
                raise self.error("expected IRI after prefix name", iri)
            self.prefixes[name.text[:-1]] = iri.text[1:-1]
        tok = self.advance()
        if self.keyword(tok) != "SELECT":
            self.check_unsupported(tok)
            raise self.error("expected SELECT", tok)
        tok = self.advance()
        if not (tok.kind == "punct" and tok.text == "*"):
            self.check_unsupported(tok)
            if tok.kind == "var" or (tok.kind == "punct" and tok.text == "("):
                raise UnsupportedFeature("SELECT projection list", "only SELECT * is supported")
            raise self.error("expected '*' after SELECT", tok)
        if self.keyword(self.peek()) == "WHERE":
            self.advance()
        elif self.keyword(self.peek()) == "FROM":
            self.check_unsupported(self.peek())
        ast = self.group()
        tok = self.peek()
        if tok.kind != "eof":
            self.check_unsupported(tok)
            raise self.error(f"unexpected {tok.text!r} after query body", tok)
        return ast

    def group(self) -> Query:
        self.expect_punct("{")
        acc: Query | None = None
        triples: list[TriplePattern] = []

        def flush() -> None:
            nonlocal acc, triples
            if triples:
                bgp = Bgp(tuple(dict.fromkeys(triples)))
                acc = bgp if acc is None else And(acc, bgp)
                triples = []

        while True:
            tok = self.peek()
            kw = self.keyword(tok)
            if tok.kind == "punct" and tok.text == "}":
                self.advance()
                break
            if tok.kind == "eof":
                raise self.error("unterminated group, expected '}'", tok)
            if tok.kind == "punct" and tok.text == "{":
                flush()
                sub = self.group()
                while self.keyword(self.peek()) == "UNION":
                    self.advance()
                    sub = Union(sub, self.group())
                acc = sub if acc is None else And(acc, sub)
            elif kw == "OPTIONAL":
                self.advance()
                flush()
                right = self.group()
                acc = Optional(acc if acc is not None else Bgp(()), right)
            elif kw == "UNION":
                raise self.error("UNION must follow a group '{ ... }'", tok)
            elif tok.kind == "punct" and tok.text == ".":
                self.advance()
            else:
                self.check_unsupported(tok)
                if triples and self.toks[self.i - 1].text != ".":
                    raise self.error("expected '.' between triple patterns", tok)
                self.triples_same_subject(triples)
        flush()
        return acc if acc is not None else Bgp(())

    def triples_same_subject(self, out: list[TriplePattern]) -> None:
        subject = self.term(position="subject")
        while True:
            predicate = self.predicate()
            while True:
                out.append(TriplePattern(subject, predicate, self.term(position="object")))
                if self.is_punct(","):
                    self.advance()
                    continue
                break
            if self.is_punct(";"):
                self.advance()
                while self.is_punct(";"):
                    self.advance()
                if self.is_punct(".") or self.is_punct("}"):
                    return
                continue
            return

    def predicate(self) -> str:
        tok = self.peek()
        if tok.kind == "var":
            raise UnsupportedFeature("predicate variables", f"{tok.text} in predicate position")
        if tok.kind == "word" and tok.text == "a":
            self.advance()
            return RDF_TYPE
        if tok.kind == "path" or (tok.kind == "punct" and tok.text == "("):
            raise UnsupportedFeature("property paths")
        iri = self.iri()
        nxt = self.peek()
        if nxt.kind == "path" or (nxt.kind == "punct" and nxt.text == "*"):
            raise UnsupportedFeature("property paths")
        return iri

    def iri(self) -> str:
        tok = self.advance()
        if tok.kind == "iri":
            return tok.text[1:-1]
        if tok.kind == "pname":
            prefix, _, local = tok.text.partition(":")
            if prefix not in self.prefixes:
                raise self.error(f"undeclared prefix {prefix + ':'!r}", tok)
            return self.prefixes[prefix] + local
        self.check_unsupported(tok)
        raise self.error(f"expected IRI, found {tok.text or 'end of input'!r}", tok)

    def term(self, position: str) -> Term:
        tok = self.peek()
        if tok.kind == "var":
            self.advance()
            return Var(tok.text[1:])
        if tok.kind == "string":
            self.advance()
            body = tok.text[1:-1]
            if tok.text[0] == "'":
                body = escape_literal(body.replace("\\'", "'"))
            suffix = ""
            if self.peek().kind == "lang":
                suffix = self.advance().text
            elif self.peek().kind == "dtmark":
                self.advance()
                suffix = f"^^<{self.iri()}>"
            return Const(canonical_literal(f'"{body}"{suffix}'))
        if tok.kind == "number":
            self.advance()
            text = tok.text
            if re.fullmatch(r"[+-]?\d+", text):
                dtype = "integer"
            elif "e" in text.lower():
                dtype = "double"
            else:
                dtype = "decimal"
            return Const(f'"{text}"^^<{XSD}{dtype}>')
        if tok.kind == "word" and tok.text in ("true", "false"):
            self.advance()
            return Const(f'"{tok.text}"^^<{XSD}boolean>')
        if tok.kind in ("iri", "pname"):
            return Const(f"<{self.iri()}>")
        self.check_unsupported(tok)
        raise self.error(f"expected {position} term, found {tok.text or 'end of input'!r}", tok)


def parse_query(text: str) -> Query:
    """Parse query text into a numbered AST."""
    return number(_Parser(text).query())
