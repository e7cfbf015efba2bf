import itertools
import random

import pytest

from simprune.bitkernel import BitVector, leq
from simprune.errors import UnsupportedFeature
from simprune.graphstore import GraphDatabase
from simprune.soi import compile, compile_bgp
from simprune.solver import (
    SolverStats,
    Strategy,
    check_solution,
    choose_eval_mode,
    order_inequalities,
    solve,
    solve_ma_baseline,
)
from simprune.sparql import parse_query
from randgen import random_bgp, random_db, random_query
from support import named, query

EX = "http://example.org/"

DIRECTOR_RELATION = {
    "place": {"place"},
    "director1": {"director"},
    "director2": {"director"},
    "movie": {"movie"},
    "coworker": {"coworker"},
}
COWORKER_RELATION = {
    "director": {"B_De_Palma", "G_Hamilton"},
    "coworker": {"D_Koepp", "H_Saltzman"},
    "movie": {"Mission_Impossible", "Goldfinger"},
}


def as_names(db, sol):
    return {v.name: named(db, vec) for v, vec in sol.items()}


def test_director_pattern_relation(directors_db):
    sol, stats = solve(compile_bgp(query("directors.rq"), directors_db), directors_db)
    assert as_names(directors_db, sol) == DIRECTOR_RELATION
    assert stats.updates <= stats.iterations


def test_coworkers_relation(movies_db):
    sol, _ = solve(compile_bgp(query("coworkers.rq"), movies_db), movies_db)
    assert as_names(movies_db, sol) == COWORKER_RELATION


def test_two_cycle_keeps_p4(cycles_db):
    sol, _ = solve(compile_bgp(query("two_cycle.rq"), cycles_db), cycles_db)
    assert as_names(cycles_db, sol) == {"v": {"p1", "p2", "p3", "p4"}, "w": {"p1", "p2", "p3", "p4"}}


def test_baseline_examples(directors_db):
    sol, stats = solve_ma_baseline(query("directors.rq"), directors_db)
    assert as_names(directors_db, sol) == DIRECTOR_RELATION
    assert stats.algorithm == "ma" and stats.updates <= stats.iterations
    empty = GraphDatabase.from_triples([])
    sol, _ = solve_ma_baseline(query("directors.rq"), empty)
    assert all(not v.any() for v in sol.values())


def test_baseline_rejects_optional(movies_db):
    with pytest.raises(UnsupportedFeature):
        solve_ma_baseline(query("coworkers_optional.rq"), movies_db)
    with pytest.raises(UnsupportedFeature):
        solve_ma_baseline(parse_query("SELECT * WHERE { {?a <p> ?b} UNION {?a <q> ?b} }"), movies_db)


def test_choose_eval_mode():
    def vec(k):
        return BitVector.from_indices(12, range(k))

    assert choose_eval_mode(vec(3), vec(10)) == "row"
    assert choose_eval_mode(vec(10), vec(3)) == "col"
    assert choose_eval_mode(vec(5), vec(5)) == "col"
    assert choose_eval_mode(vec(3), vec(10), "col") == "col"
    assert choose_eval_mode(vec(10), vec(3), "row") == "row"
    with pytest.raises(ValueError):
        choose_eval_mode(vec(1), vec(1), "diagonal")


def test_sparsity_puts_zero_matrix_first(movies_db):
    q = parse_query(f"SELECT * WHERE {{ ?x <{EX}directed> ?y . ?y <{EX}missing> ?z }}")
    soi = compile_bgp(q, movies_db)
    order = order_inequalities(soi, movies_db, "sparsity")
    first = soi.inequalities[order[0]]
    assert first.label == EX + "missing"
    assert order_inequalities(soi, movies_db, "textual") == list(range(len(soi.inequalities)))
    assert sorted(order) == list(range(len(soi.inequalities)))


def test_subsumptions_follow_their_upper(movies_db):
    soi = compile(query("appendix/q16.rq"), movies_db)
    order = order_inequalities(soi, movies_db, "sparsity")
    pos = {idx: i for i, idx in enumerate(order)}
    for s in soi.subsumptions:
        narrowing = [pos[p.index] for p in soi.propagations if p.target == s.upper]
        if narrowing:
            assert pos[s.index] > max(narrowing)


def test_strategy_validation():
    with pytest.raises(ValueError):
        Strategy("random")
    with pytest.raises(ValueError):
        Strategy(eval_mode="diag")


def test_stats_serialise(movies_db):
    _, stats = solve(compile(query("coworkers_optional.rq"), movies_db), movies_db, Strategy("textual", "row"))
    d = stats.to_dict()
    assert d["ordering"] == "textual" and d["eval_mode"] == "row"
    assert {"iterations", "updates", "wall_time_ms", "bits_cleared"} <= set(d)
    assert d["col_evals"] == 0
    total = SolverStats()
    total.merge(stats)
    total.merge(stats)
    assert total.iterations == 2 * stats.iterations


def test_empty_target_skips_but_source_fires():
    # y is empty from the start; its dependents still run and empty x
    db = GraphDatabase.from_triples([("<n0>", "a", "<n1>")])
    q = parse_query("SELECT * WHERE { ?x <a> ?y . ?y <b> ?z }")
    sol, stats = solve(compile_bgp(q, db), db, Strategy("textual"))
    assert all(not v.any() for v in sol.values())
    assert stats.skipped > 0


@pytest.mark.parametrize("seed", range(100))
def test_solution_is_valid_and_below_init(seed):
    rng = random.Random(seed)
    db = random_db(rng)
    soi = compile(random_query(rng, n_nodes=db.node_count), db)
    sol, stats = solve(soi, db)
    assert check_solution(soi, db, sol) == []
    assert all(leq(sol[v], soi.init[v].bound) for v in soi.vars)
    assert stats.updates <= stats.iterations


def _all_assignments(vars_, n):
    for bits in itertools.product(range(1 << n), repeat=len(vars_)):
        yield {v: BitVector(n, b) for v, b in zip(vars_, bits)}


@pytest.mark.parametrize("seed", range(40))
def test_largest_among_all_valid_assignments(seed):
    rng = random.Random(seed)
    db = random_db(rng, max_nodes=3, max_labels=2, density=0.4)
    q = random_query(rng, depth=1, n_vars=2, n_nodes=db.node_count)
    soi = compile(q, db)
    if len(soi.vars) * db.node_count > 12:
        pytest.skip("assignment space too large")
    best, _ = solve(soi, db)
    for cand in _all_assignments(soi.vars, db.node_count):
        if not check_solution(soi, db, cand):
            assert all(leq(cand[v], best[v]) for v in soi.vars)


@pytest.mark.parametrize("seed", range(60))
def test_baseline_matches_solver(seed):
    rng = random.Random(seed)
    db = random_db(rng, max_nodes=10)
    bgp = random_bgp(rng, 5, db.node_count, max_triples=5)
    sol, _ = solve(compile_bgp(bgp, db), db)
    base, _ = solve_ma_baseline(bgp, db)
    assert sol == base
