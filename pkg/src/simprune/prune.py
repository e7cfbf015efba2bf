"""Turn solutions into pruned triple sets and run the per-query pipeline."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bitkernel import BitVector
from .graphstore import GraphDatabase
from .oracle import DEFAULT_MAX_NODES, naive_dual_simulation
from .soi import SOI, SolverVar, compile, project_solution
from .solver import Solution, SolverStats, Strategy, solve, solve_ma_baseline
from .sparql import Query, to_union_free

Triple = tuple[str, int, int]


def _endpoint_mask(end, solution: Solution, n: int) -> np.ndarray:
    if isinstance(end, SolverVar):
        return solution[end].to_numpy()
    mask = np.zeros(n, dtype=bool)
    if end is not None:
        mask[end] = True
    return mask


def prune_triples(solution: Solution, soi: SOI, db: GraphDatabase) -> set[Triple]:
    """Data edges ``(o, a, o')`` with ``o`` a candidate of the subject and ``o'`` of the object of some pattern edge."""
    out: set[Triple] = set()
    n = db.node_count
    for edge in soi.edges:
        m = db.fwd.get(edge.label)
        if m is None or m.nnz == 0:
            continue
        src = _endpoint_mask(edge.subject, solution, n)
        dst = _endpoint_mask(edge.object, solution, n)
        if not src.any() or not dst.any():
            continue
        rows, cols = m.coo()
        keep = src[rows] & dst[cols]
        out.update((edge.label, s, o) for s, o in zip(rows[keep].tolist(), cols[keep].tolist()))
    return out


@dataclass
class PruneReport:
    query_id: str
    candidates: dict[str, BitVector]
    pruned: set[Triple]
    db_triples: int
    stats: SolverStats
    branches: int = 1
    verified: dict | None = None
    branch_results: list[tuple[Query, SOI, Solution]] = field(default_factory=list, repr=False)

    @property
    def pruned_count(self) -> int:
        return len(self.pruned)

    def candidate_counts(self) -> dict[str, int]:
        return {v: vec.popcount() for v, vec in sorted(self.candidates.items())}

    def summary(self) -> dict:
        d = {
            "query": self.query_id,
            "branches": self.branches,
            "db_triples": self.db_triples,
            "pruned_triples": self.pruned_count,
            "pruned_ratio": 1.0 - self.pruned_count / self.db_triples if self.db_triples else 0.0,
        }
        d.update({f"candidates.{v}": c for v, c in self.candidate_counts().items()})
        d.update(self.stats.to_dict())
        if self.verified is not None:
            d.update({f"verify.{k}": v for k, v in self.verified.items()})
        return d


def _solve_branch(
    branch: Query, soi: SOI, db: GraphDatabase, algorithm: str, strategy: Strategy, oracle_max_nodes: int
) -> tuple[Solution, SolverStats]:
    if algorithm == "soi":
        return solve(soi, db, strategy)
    if algorithm == "ma":
        return solve_ma_baseline(branch, db)
    if algorithm == "naive":
        start = time.perf_counter()
        rel = naive_dual_simulation(branch, db, max_nodes=oracle_max_nodes)
        stats = SolverStats("naive", wall_time_ms=(time.perf_counter() - start) * 1000.0)
        return {SolverVar(v): BitVector.from_indices(db.node_count, nodes) for v, nodes in rel.items()}, stats
    raise ValueError(f"unknown algorithm {algorithm!r}")


def prune_query(
    ast: Query,
    db: GraphDatabase,
    query_id: str = "query",
    algorithm: str = "soi",
    strategy: Strategy = Strategy(),
    oracle_max_nodes: int = DEFAULT_MAX_NODES,
) -> PruneReport:
    """Solve every union-free branch of ``ast`` and unite the results."""
    branches = to_union_free(ast)
    stats = SolverStats(algorithm, strategy.ordering if algorithm == "soi" else "",
                        strategy.eval_mode if algorithm == "soi" else "")
    candidates: dict[str, BitVector] = {}
    pruned: set[Triple] = set()
    results = []
    for branch in branches:
        soi = compile(branch, db)
        solution, branch_stats = _solve_branch(branch, soi, db, algorithm, strategy, oracle_max_nodes)
        stats.merge(branch_stats)
        pruned |= prune_triples(solution, soi, db)
        for v, vec in project_solution(solution, soi).items():
            candidates[v] = candidates[v] | vec if v in candidates else vec
        results.append((branch, soi, solution))
    return PruneReport(query_id, candidates, pruned, db.triple_count, stats, len(branches), None, results)
