"""Brute-force reference semantics for small inputs.

Nothing here shares code with the bit-vector solver: matches are enumerated
by backtracking over Python sets, and the dual simulation is computed by
removing violating pairs one at a time.
"""

from __future__ import annotations

from typing import Iterable

from .errors import OracleRefusal
from .graphstore import GraphDatabase
from .sparql import And, Bgp, Const, Optional, Query, TriplePattern, Union, Var

Match = frozenset  # of (variable name, node id) pairs
Triple = tuple[str, int, int]
DEFAULT_MAX_NODES = 64


class _Index:
    def __init__(self, db: GraphDatabase):
        self.succ: dict[str, dict[int, set[int]]] = {}
        self.pred: dict[str, dict[int, set[int]]] = {}
        self.edges: dict[str, set[tuple[int, int]]] = {}
        for label, s, o in db.triples():
            self.succ.setdefault(label, {}).setdefault(s, set()).add(o)
            self.pred.setdefault(label, {}).setdefault(o, set()).add(s)
            self.edges.setdefault(label, set()).add((s, o))


def _guard(db: GraphDatabase, max_nodes: int) -> None:
    if db.node_count > max_nodes:
        raise OracleRefusal(f"database has {db.node_count} nodes, oracle limit is {max_nodes}")


def _bgp(triples: tuple[TriplePattern, ...], db: GraphDatabase, idx: _Index) -> set[tuple[Match, frozenset]]:
    consts: dict[str, int | None] = {}
    for t in triples:
        for term in (t.subject, t.object):
            if isinstance(term, Const) and term.term not in consts:
                consts[term.term] = db.resolve_term(term.term)

    def value(term, binding):
        return binding.get(term.name) if isinstance(term, Var) else consts[term.term]

    out: set[tuple[Match, frozenset]] = set()
    order = list(triples)

    def extend(i: int, binding: dict[str, int], used: list[Triple]) -> None:
        if i == len(order):
            out.add((frozenset(binding.items()), frozenset(used)))
            return
        t = order[i]
        a = t.predicate
        s, o = value(t.subject, binding), value(t.object, binding)
        if isinstance(t.subject, Const) and s is None or isinstance(t.object, Const) and o is None:
            return
        if s is not None and o is not None:
            candidates = [(s, o)] if (s, o) in idx.edges.get(a, ()) else []
        elif s is not None:
            candidates = [(s, y) for y in idx.succ.get(a, {}).get(s, ())]
        elif o is not None:
            candidates = [(x, o) for x in idx.pred.get(a, {}).get(o, ())]
        else:
            candidates = list(idx.edges.get(a, ()))
        for x, y in candidates:
            new = dict(binding)
            if isinstance(t.subject, Var):
                new[t.subject.name] = x
            if isinstance(t.object, Var):
                if new.get(t.object.name, y) != y:
                    continue
                new[t.object.name] = y
            used.append((a, x, y))
            extend(i + 1, new, used)
            used.pop()

    extend(0, {}, [])
    return out


def _compatible(d1: dict[str, int], d2: dict[str, int]) -> bool:
    if len(d2) < len(d1):
        d1, d2 = d2, d1
    return all(d2.get(k, v) == v for k, v in d1.items())


def _derivations(ast: Query, db: GraphDatabase, idx: _Index) -> set[tuple[Match, frozenset]]:
    """Matches paired with the data triples that produced them."""
    if isinstance(ast, Bgp):
        return _bgp(ast.triples, db, idx)
    left = _derivations(ast.left, db, idx)
    right = _derivations(ast.right, db, idx)
    if isinstance(ast, Union):
        return left | right
    if not isinstance(ast, (And, Optional)):
        raise TypeError(f"not a query node: {ast!r}")
    right_dicts = [(m2, u2, dict(m2)) for m2, u2 in right]
    out = set()
    for m1, u1 in left:
        d1 = dict(m1)
        partners = [(m2, u2) for m2, u2, d2 in right_dicts if _compatible(d1, d2)]
        out.update((m1 | m2, u1 | u2) for m2, u2 in partners)
        if not partners and isinstance(ast, Optional):
            out.add((m1, u1))
    return out


def enumerate_matches(ast: Query, db: GraphDatabase, max_nodes: int = DEFAULT_MAX_NODES) -> set[Match]:
    """All matches of ``ast`` in ``db`` (partial maps as frozensets of pairs)."""
    _guard(db, max_nodes)
    return {m for m, _ in _derivations(ast, db, _Index(db))}


def required_triples(ast: Query, db: GraphDatabase, max_nodes: int = DEFAULT_MAX_NODES) -> set[Triple]:
    """Data triples used by at least one match; a sound pruning must keep all of them."""
    _guard(db, max_nodes)
    out: set[Triple] = set()
    for _, used in _derivations(ast, db, _Index(db)):
        out |= used
    return out


def bindings(matches: Iterable[Match]) -> dict[str, set[int]]:
    out: dict[str, set[int]] = {}
    for m in matches:
        for v, node in m:
            out.setdefault(v, set()).add(node)
    return out


def naive_dual_simulation(
    pattern: Iterable[TriplePattern] | Query,
    db: GraphDatabase,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> dict[str, set[int]]:
    """Largest dual simulation between a conjunctive pattern and ``db``.

    Constant endpoints are fixed to their node.  Starts from all pairs and
    drops any (variable, node) pair lacking a witness for some incident edge,
    until nothing changes.
    """
    _guard(db, max_nodes)
    if isinstance(pattern, (Bgp, And, Optional, Union)):
        from .solver import bgp_triples

        pattern = bgp_triples(pattern)
    triples = list(pattern)
    idx = _Index(db)
    names = sorted({t.name for tp in triples for t in (tp.subject, tp.object) if isinstance(t, Var)})
    rel = {v: set(range(db.node_count)) for v in names}

    def candidates(term) -> set[int]:
        if isinstance(term, Var):
            return rel[term.name]
        node = db.resolve_term(term.term)
        return set() if node is None else {node}

    for tp in triples:
        if not isinstance(tp.subject, Var) and not isinstance(tp.object, Var):
            s, o = candidates(tp.subject), candidates(tp.object)
            if not any((x, y) in idx.edges.get(tp.predicate, ()) for x in s for y in o):
                return {v: set() for v in names}

    changed = True
    while changed:
        changed = False
        for tp in triples:
            a = tp.predicate
            succ, pred = idx.succ.get(a, {}), idx.pred.get(a, {})
            if isinstance(tp.subject, Var):
                targets = candidates(tp.object)
                for x in list(rel[tp.subject.name]):
                    if not succ.get(x, set()) & targets:
                        rel[tp.subject.name].discard(x)
                        changed = True
            if isinstance(tp.object, Var):
                sources = candidates(tp.subject)
                for y in list(rel[tp.object.name]):
                    if not pred.get(y, set()) & sources:
                        rel[tp.object.name].discard(y)
                        changed = True
    return rel
