"""Query-aware pruning of RDF graph databases via dual simulation over bit-vectors."""

from .bitkernel import BitMatrix, BitVector, and_assign, col_summary, leq, row_summary, vec_mat_mul
from .errors import (
    DimensionMismatch,
    OracleRefusal,
    ParseError,
    SimpruneError,
    UnsupportedFeature,
    VerificationFailure,
)
from .graphstore import GraphDatabase, load_ntriples, parse_ntriples, write_ntriples
from .oracle import enumerate_matches, naive_dual_simulation, required_triples
from .prune import PruneReport, prune_query, prune_triples
from .soi import SOI, InitBound, Propagation, SolverVar, Subsumption, compile, compile_bgp, project_solution
from .solver import (
    SolverStats,
    Strategy,
    check_solution,
    choose_eval_mode,
    order_inequalities,
    solve,
    solve_ma_baseline,
)
from .sparql import And, Bgp, Const, Optional, TriplePattern, Union, Var, mand, parse_query, to_sparql, to_union_free, variables, well_designed

__version__ = "0.1.0"

__all__ = [
    "And",
    "and_assign",
    "Bgp",
    "BitMatrix",
    "BitVector",
    "check_solution",
    "choose_eval_mode",
    "col_summary",
    "compile",
    "compile_bgp",
    "Const",
    "DimensionMismatch",
    "enumerate_matches",
    "GraphDatabase",
    "InitBound",
    "leq",
    "load_ntriples",
    "mand",
    "naive_dual_simulation",
    "Optional",
    "OracleRefusal",
    "order_inequalities",
    "parse_ntriples",
    "parse_query",
    "ParseError",
    "project_solution",
    "Propagation",
    "prune_query",
    "prune_triples",
    "PruneReport",
    "required_triples",
    "row_summary",
    "SimpruneError",
    "SOI",
    "solve",
    "solve_ma_baseline",
    "SolverStats",
    "SolverVar",
    "Strategy",
    "Subsumption",
    "to_sparql",
    "to_union_free",
    "TriplePattern",
    "Union",
    "UnsupportedFeature",
    "Var",
    "variables",
    "vec_mat_mul",
    "VerificationFailure",
    "well_designed",
    "write_ntriples",
]
