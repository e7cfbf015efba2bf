"""Dictionary-encoded graph database with per-label adjacency bit-matrices.

Nodes are RDF terms (IRIs, literals, blank nodes) identified by their
canonical N-Triples spelling, e.g. ``<http://ex.org/a>``, ``"Paris"@fr`` or
``_:b0``.  Labels are predicate IRIs stored without angle brackets.
"""

from __future__ import annotations

import io
import os
import re
from typing import IO, Iterable, Iterator, Literal, Sequence

import numpy as np

from .bitkernel import BitMatrix
from .errors import ParseError

Direction = Literal["forward", "backward"]

_IRI = r"<[^<>\"{}|^`\\\x00-\x20]*>"
_BNODE = r"_:[A-Za-z0-9_](?:[A-Za-z0-9_\-.]*[A-Za-z0-9_\-])?"
_LITERAL = r'"(?:[^"\\\n\r]|\\.)*"(?:@[A-Za-z]+(?:-[A-Za-z0-9]+)*|\^\^' + _IRI + r")?"
_LINE = re.compile(
    rf"[ \t]*({_IRI}|{_BNODE})[ \t]+({_IRI})[ \t]+({_IRI}|{_BNODE}|{_LITERAL})[ \t]*\.[ \t]*(?:#.*)?"
)
_LITERAL_PARTS = re.compile(r'"((?:[^"\\]|\\.)*)"(.*)', re.S)
_ESCAPE = re.compile(r"\\(?:u([0-9A-Fa-f]{4})|U([0-9A-Fa-f]{8})|(.))", re.S)
_SIMPLE_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape_literal(body: str) -> str:
    def sub(m: re.Match) -> str:
        if m.group(1) or m.group(2):
            return chr(int(m.group(1) or m.group(2), 16))
        ch = m.group(3)
        if ch not in _SIMPLE_ESCAPES:
            raise ValueError(f"invalid escape \\{ch}")
        return _SIMPLE_ESCAPES[ch]

    return _ESCAPE.sub(sub, body)


def escape_literal(value: str) -> str:
    return (
        value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\r", "\\r").replace("\t", "\\t")
    )


def canonical_literal(text: str) -> str:
    """Normalise a quoted literal (with optional tag/datatype) to one spelling."""
    m = _LITERAL_PARTS.fullmatch(text)
    if m is None:
        raise ValueError(f"not a literal: {text}")
    return f'"{escape_literal(unescape_literal(m.group(1)))}"{m.group(2)}'


def canonical_term(term: str) -> str:
    """Canonical node key for a term in N-Triples spelling; bare strings are taken as IRIs."""
    if term.startswith('"'):
        return canonical_literal(term)
    if term.startswith("<") or term.startswith("_:"):
        return term
    return f"<{term}>"


class GraphDatabase:
    """Immutable graph database ``(O_D, Σ, E_D)``.

    ``terms[i]`` is the canonical spelling of node ``i``; ``fwd[a]`` and
    ``bwd[a]`` are the forward and backward adjacency matrices of label ``a``.
    """

    def __init__(self, terms: list[str], labels: list[str], edges: dict[str, tuple[np.ndarray, np.ndarray]]):
        n = len(terms)
        self.terms = terms
        self.term_ids = {t: i for i, t in enumerate(terms)}
        if len(self.term_ids) != n:
            raise ValueError("duplicate node terms")
        self.labels = list(labels)
        self.fwd: dict[str, BitMatrix] = {}
        self.bwd: dict[str, BitMatrix] = {}
        for label in self.labels:
            src, dst = edges[label]
            f = BitMatrix.from_pairs(n, src, dst)
            b = f.transpose()
            self.fwd[label] = f
            self.bwd[label] = b
        self.triple_count = sum(m.nnz for m in self.fwd.values())
        self._zero = BitMatrix.zeros(n)

    @classmethod
    def from_triples(
        cls,
        triples: Iterable[tuple[str, str, str]],
        nodes: Sequence[str] = (),
    ) -> GraphDatabase:
        """Build from ``(subject, label, object)`` term triples.

        Subject/object are N-Triples terms (bare strings count as IRIs),
        labels are bare IRIs.  Ids go to ``nodes`` first, then to terms in
        first-seen order.
        """
        ids: dict[str, int] = {}
        for t in nodes:
            ids.setdefault(canonical_term(t), len(ids))
        per_label: dict[str, tuple[list[int], list[int]]] = {}
        for s, p, o in triples:
            s, o = canonical_term(s), canonical_term(o)
            si = ids.setdefault(s, len(ids))
            oi = ids.setdefault(o, len(ids))
            if p.startswith("<") and p.endswith(">"):
                p = p[1:-1]
            lists = per_label.get(p)
            if lists is None:
                lists = per_label[p] = ([], [])
            lists[0].append(si)
            lists[1].append(oi)
        edges = {p: (np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) for p, (a, b) in per_label.items()}
        return cls(list(ids), list(per_label), edges)

    @property
    def node_count(self) -> int:
        return len(self.terms)

    def adjacency(self, label: str, direction: Direction = "forward") -> BitMatrix:
        """Adjacency matrix of ``label``; the zero matrix for unknown labels."""
        if direction not in ("forward", "backward"):
            raise ValueError(f"unknown direction {direction!r}")
        table = self.fwd if direction == "forward" else self.bwd
        return table.get(label, self._zero)

    def resolve_term(self, term: str) -> int | None:
        try:
            return self.term_ids.get(canonical_term(term))
        except ValueError:
            return None

    def term(self, node: int) -> str:
        return self.terms[node]

    def has_edge(self, s: int, label: str, o: int) -> bool:
        m = self.fwd.get(label)
        return m is not None and m[s, o]

    def triples(self) -> Iterator[tuple[str, int, int]]:
        """All edges as ``(label, subject_id, object_id)``, sorted."""
        for label in sorted(self.labels):
            rows, cols = self.fwd[label].coo()
            for s, o in zip(rows.tolist(), cols.tolist()):
                yield label, s, o

    def __repr__(self) -> str:
        return f"GraphDatabase(nodes={self.node_count}, labels={len(self.labels)}, triples={self.triple_count})"


def _lines(source) -> Iterator[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            yield from _lines(fh)
        return
    if isinstance(source, bytes):
        source = io.BytesIO(source)
    for raw in source:
        yield raw.decode("utf-8") if isinstance(raw, bytes) else raw


def parse_ntriples(source) -> Iterator[tuple[str, str, str]]:
    """Yield ``(subject, label, object)`` from N-Triples lines."""
    for lineno, line in enumerate(_lines(source), start=1):
        line = line.rstrip("\r\n")
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        m = _LINE.fullmatch(line)
        if m is None:
            raise ParseError(f"malformed N-Triples statement: {stripped[:80]!r}", line=lineno)
        s, p, o = m.groups()
        if o.startswith('"'):
            try:
                o = canonical_literal(o)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
        yield s, p[1:-1], o


def load_ntriples(source: str | os.PathLike | bytes | IO[bytes] | Iterable[str]) -> GraphDatabase:
    """Load an N-Triples file (path, bytes, binary stream or line iterable)."""
    return GraphDatabase.from_triples(parse_ntriples(source))


def format_triple(db: GraphDatabase, label: str, s: int, o: int) -> str:
    return f"{db.terms[s]} <{label}> {db.terms[o]} ."


def write_ntriples(db: GraphDatabase, triples: Iterable[tuple[str, int, int]], out: IO[str]) -> int:
    """Write ``(label, s, o)`` id triples as N-Triples; returns the line count."""
    count = 0
    for label, s, o in triples:
        out.write(format_triple(db, label, s, o) + "\n")
        count += 1
    return count
