"""Worklist fixpoint solver for systems of inequalities, plus a pairwise-removal baseline."""

from __future__ import annotations

import heapq
import random
import time
from dataclasses import asdict, dataclass, field
from typing import Literal

import numpy as np

from .bitkernel import BitVector, EvalMode, and_assign, col_summary, leq, vec_mat_mul
from .errors import UnsupportedFeature
from .graphstore import GraphDatabase
from .soi import SOI, Propagation, SolverVar
from .sparql import And, Bgp, Optional, Query, TriplePattern, Union, Var

Solution = dict[SolverVar, BitVector]
Ordering = Literal["sparsity", "textual"]
EvalChoice = Literal["auto", "row", "col"]


@dataclass(frozen=True)
class Strategy:
    ordering: Ordering = "sparsity"
    eval_mode: EvalChoice = "auto"
    # shuffles worklist priorities; used to check that the fixpoint does not depend on them
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.ordering not in ("sparsity", "textual"):
            raise ValueError(f"unknown ordering {self.ordering!r}")
        if self.eval_mode not in ("auto", "row", "col"):
            raise ValueError(f"unknown evaluation mode {self.eval_mode!r}")


@dataclass
class SolverStats:
    algorithm: str = "soi"
    ordering: str = ""
    eval_mode: str = ""
    iterations: int = 0
    updates: int = 0
    skipped: int = 0
    bits_cleared: int = 0
    row_evals: int = 0
    col_evals: int = 0
    subsumption_evals: int = 0
    wall_time_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = asdict(self)
        extra = d.pop("extra")
        d.update(extra)
        return d

    def merge(self, other: SolverStats) -> None:
        """Accumulate counters of another run (e.g. another union branch)."""
        for key in ("iterations", "updates", "skipped", "bits_cleared", "row_evals", "col_evals",
                    "subsumption_evals", "wall_time_ms"):
            setattr(self, key, getattr(self, key) + getattr(other, key))
        for key, value in other.extra.items():
            self.extra[key] = self.extra.get(key, 0) + value


def choose_eval_mode(source: BitVector, target: BitVector, mode: EvalChoice = "auto") -> EvalMode:
    """Row-wise iff the source has strictly fewer candidates than the target."""
    if mode == "row" or mode == "col":
        return mode
    if mode != "auto":
        raise ValueError(f"unknown evaluation mode {mode!r}")
    return "row" if source.popcount() < target.popcount() else "col"


def order_inequalities(soi: SOI, db: GraphDatabase, ordering: Ordering = "sparsity") -> list[int]:
    """Scheduling order as a permutation of ``soi.inequalities`` indices.

    ``sparsity`` puts propagations whose matrix has the fewest non-empty
    columns first (ties keep compile order); each subsumption goes right
    after the last propagation that narrows its upper variable.
    """
    if ordering == "textual":
        return [e.index for e in soi.inequalities]
    if ordering != "sparsity":
        raise ValueError(f"unknown ordering {ordering!r}")

    props = soi.propagations
    weight = {}
    for p in props:
        key = (p.label, p.direction)
        if key not in weight:
            weight[key] = col_summary(db.adjacency(p.label, p.direction)).popcount()
    props = sorted(props, key=lambda p: weight[(p.label, p.direction)])

    last_pos: dict[SolverVar, int] = {}
    for pos, p in enumerate(props):
        last_pos[p.target] = pos
    after: dict[int, list[int]] = {}
    for s in soi.subsumptions:
        after.setdefault(last_pos.get(s.upper, -1), []).append(s.index)

    order = list(after.get(-1, []))
    for pos, p in enumerate(props):
        order.append(p.index)
        order.extend(after.get(pos, []))
    return order


def solve(soi: SOI, db: GraphDatabase, strategy: Strategy = Strategy()) -> tuple[Solution, SolverStats]:
    """Largest solution of ``soi`` by chaotic iteration over unstable inequalities."""
    start = time.perf_counter()
    stats = SolverStats("soi", strategy.ordering, strategy.eval_mode)
    chi: Solution = {v: soi.init[v].bound.copy() for v in soi.vars}

    order = order_inequalities(soi, db, strategy.ordering)
    priority = list(range(len(order)))
    if strategy.seed is not None:
        random.Random(strategy.seed).shuffle(priority)
    rank = {idx: priority[pos] for pos, idx in enumerate(order)}

    # keys are (round, rank): an inequality made unstable again waits for the next round,
    # so every unstable inequality gets a turn before any fires twice
    heap = [(0, rank[idx], idx) for idx in order]
    heapq.heapify(heap)
    queued = set(order)
    eqs = soi.inequalities

    while heap:
        rnd, _, idx = heapq.heappop(heap)
        queued.discard(idx)
        eq = eqs[idx]
        if isinstance(eq, Propagation):
            target = chi[eq.target]
            if not target.any():
                stats.skipped += 1
                continue
            source = chi[eq.source]
            mode = choose_eval_mode(source, target, strategy.eval_mode)
            if mode == "row":
                stats.row_evals += 1
            else:
                stats.col_evals += 1
            r = vec_mat_mul(source, db.adjacency(eq.label, eq.direction), mode, within=target)
            var = eq.target
        else:
            target = chi[eq.lower]
            if not target.any():
                stats.skipped += 1
                continue
            stats.subsumption_evals += 1
            r = chi[eq.upper]
            var = eq.lower
        stats.iterations += 1
        before = target.popcount()
        _, changed = and_assign(target, r)
        if changed:
            stats.updates += 1
            stats.bits_cleared += before - target.popcount()
            for dep in soi.dependents[var]:
                if dep not in queued:
                    queued.add(dep)
                    heapq.heappush(heap, (rnd + 1, rank[dep], dep))

    stats.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return chi, stats


def check_solution(soi: SOI, db: GraphDatabase, solution: Solution) -> list[str]:
    """Inequalities violated by ``solution`` (empty list iff valid)."""
    bad = []
    for v in soi.vars:
        if not leq(solution[v], soi.init[v].bound):
            bad.append(str(soi.init[v]))
    for eq in soi.inequalities:
        if isinstance(eq, Propagation):
            r = vec_mat_mul(solution[eq.source], db.adjacency(eq.label, eq.direction))
            ok = leq(solution[eq.target], r)
        else:
            ok = leq(solution[eq.lower], solution[eq.upper])
        if not ok:
            bad.append(str(eq))
    return bad


# --------------------------------------------------------------------------- baseline


def bgp_triples(ast: Query) -> list[TriplePattern]:
    """Triples of a conjunctive query (Bgp / And only)."""
    if isinstance(ast, Bgp):
        return list(ast.triples)
    if isinstance(ast, And):
        return bgp_triples(ast.left) + bgp_triples(ast.right)
    kind = "OPTIONAL" if isinstance(ast, Optional) else "UNION" if isinstance(ast, Union) else type(ast).__name__
    raise UnsupportedFeature(kind, "the pairwise baseline handles basic graph patterns only")


def solve_ma_baseline(bgp: Query, db: GraphDatabase) -> tuple[Solution, SolverStats]:
    """Largest dual simulation by disqualifying (variable, node) pairs.

    Starts from every variable related to every node and, round-robin over
    variables and their incident pattern edges, removes nodes that lack a
    witnessing edge into the current relation.  Constants act as fixed
    singleton candidate sets.
    """
    start = time.perf_counter()
    stats = SolverStats("ma")
    triples = list(dict.fromkeys(bgp_triples(bgp)))
    n = db.node_count
    names = list(dict.fromkeys(t.name for tp in triples for t in (tp.subject, tp.object) if isinstance(t, Var)))
    sim = {v: np.ones(n, dtype=bool) for v in names}

    def fixed(term) -> np.ndarray:
        mask = np.zeros(n, dtype=bool)
        node = db.resolve_term(term.term)
        if node is not None:
            mask[node] = True
        return mask

    incident: dict[str, list[tuple[str, str, object]]] = {v: [] for v in names}
    unsat = False
    for tp in triples:
        s, o = tp.subject, tp.object
        if isinstance(s, Var):
            incident[s.name].append(("out", tp.predicate, o))
        if isinstance(o, Var):
            incident[o.name].append(("in", tp.predicate, s))
        if not isinstance(s, Var) and not isinstance(o, Var):
            si, oi = db.resolve_term(s.term), db.resolve_term(o.term)
            unsat |= si is None or oi is None or not db.has_edge(si, tp.predicate, oi)
    if unsat:
        for v in names:
            sim[v][:] = False

    coo = {}
    changed = not unsat
    while changed:
        changed = False
        for v in names:
            for kind, label, other in incident[v]:
                if not sim[v].any():
                    break
                if label not in coo:
                    coo[label] = db.adjacency(label).coo()
                rows, cols = coo[label]
                other_set = sim[other.name] if isinstance(other, Var) else fixed(other)
                witness = np.zeros(n, dtype=bool)
                if kind == "out":
                    witness[rows[other_set[cols]]] = True
                else:
                    witness[cols[other_set[rows]]] = True
                stats.iterations += 1
                kept = sim[v] & witness
                removed = int(sim[v].sum() - kept.sum())
                if removed:
                    sim[v] = kept
                    stats.updates += 1
                    stats.bits_cleared += removed
                    changed = True

    stats.wall_time_ms = (time.perf_counter() - start) * 1000.0
    return {SolverVar(v): BitVector.from_numpy(sim[v]) for v in names}, stats
