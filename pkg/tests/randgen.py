"""Random small databases and queries for property tests."""

from __future__ import annotations

import random

from simprune.graphstore import GraphDatabase
from simprune.sparql import And, Bgp, Const, Optional, TriplePattern, Union, Var, number

EX = "http://ex.org/"
LABELS = ["a", "b", "c", "d"]


def node(i: int) -> str:
    return f"<{EX}n{i}>"


def random_db(rng: random.Random, max_nodes: int = 12, max_labels: int = 4, density: float | None = None) -> GraphDatabase:
    n = rng.randint(1, max_nodes)
    labels = [EX + x for x in LABELS[: rng.randint(1, max_labels)]]
    p = density if density is not None else rng.uniform(0.05, 0.35)
    triples = [
        (node(s), label, node(o))
        for label in labels
        for s in range(n)
        for o in range(n)
        if rng.random() < p
    ]
    return GraphDatabase.from_triples(triples, nodes=[node(i) for i in range(n)])


def random_term(rng: random.Random, n_vars: int, n_nodes: int, const_p: float):
    if rng.random() < const_p:
        # occasionally a node that is not in the database
        return Const(node(rng.randrange(n_nodes + 1)))
    return Var(f"v{rng.randrange(n_vars)}")


def random_bgp(rng: random.Random, n_vars: int, n_nodes: int, const_p: float = 0.1, max_triples: int = 3) -> Bgp:
    triples = []
    for _ in range(rng.randint(1, max_triples)):
        s = random_term(rng, n_vars, n_nodes, const_p)
        o = random_term(rng, n_vars, n_nodes, const_p)
        triples.append(TriplePattern(s, EX + rng.choice(LABELS), o))
    return Bgp(tuple(dict.fromkeys(triples)))


def random_query(
    rng: random.Random,
    depth: int = 3,
    n_vars: int = 5,
    n_nodes: int = 12,
    unions: bool = False,
    const_p: float = 0.1,
):
    def go(d: int):
        if d == 0 or rng.random() < 0.35:
            return random_bgp(rng, n_vars, n_nodes, const_p)
        ops = [And, Optional, Optional] + ([Union] if unions else [])
        op = rng.choice(ops)
        return op(go(d - 1), go(d - 1))

    return number(go(depth))
