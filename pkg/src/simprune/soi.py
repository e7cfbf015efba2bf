"""Compile union-free queries into systems of inequalities over node bit-vectors.

Each pattern edge ``(v, a, w)`` between variables yields two inequalities::

    w <= v x F[a]      (every candidate of w has an a-predecessor among v's)
    v <= w x B[a]      (every candidate of v has an a-successor among w's)

and every solver variable gets one init bound, the AND of the row/column
summaries of its incident labels.

OPTIONAL right-hand sides open a new *scope*.  Variables occurring in a
non-root scope are renamed to surrogates ``v@q<id>`` (``id`` being the
subquery id of the optional side) and bounded from above by the occurrence
in the nearest enclosing scope that mentions ``v``.  Nested optionals thus
produce chains ``z@q5 <= z@q3 <= z``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union as _U

from .bitkernel import BitMatrix, BitVector, col_summary, row_summary
from .graphstore import Direction, GraphDatabase
from .sparql import And, Bgp, Optional, Query, TriplePattern, Union, Var

Scope = _U[int, None]


@dataclass(frozen=True, order=True)
class SolverVar:
    """A query variable, or its surrogate for the optional side with subquery id ``scope``."""

    base: str
    scope: int | None = None

    @property
    def is_surrogate(self) -> bool:
        return self.scope is not None

    @property
    def surrogate_of(self) -> tuple[str, int] | None:
        return None if self.scope is None else (self.base, self.scope)

    @property
    def name(self) -> str:
        # '@' cannot occur in SPARQL variable names, so surrogates never collide
        return self.base if self.scope is None else f"{self.base}@q{self.scope}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, eq=False)
class InitBound:
    var: SolverVar
    bound: BitVector
    index: int = 0

    def __str__(self) -> str:
        return f"{self.var} <= init[popcount={self.bound.popcount()}]"


@dataclass(frozen=True)
class Propagation:
    target: SolverVar
    source: SolverVar
    label: str
    direction: Direction
    index: int = 0

    def __str__(self) -> str:
        m = "F" if self.direction == "forward" else "B"
        return f"{self.target} <= {self.source} x {m}[{self.label}]"


@dataclass(frozen=True)
class Subsumption:
    lower: SolverVar
    upper: SolverVar
    index: int = 0

    def __post_init__(self) -> None:
        if self.lower == self.upper:
            raise ValueError("subsumption needs two distinct variables")

    def __str__(self) -> str:
        return f"{self.lower} <= {self.upper}"


Inequality = _U[InitBound, Propagation, Subsumption]
# an endpoint is a solver variable, a resolved constant node id, or None for an unknown constant
Endpoint = _U[SolverVar, int, None]


@dataclass(frozen=True)
class PatternEdge:
    subject: Endpoint
    label: str
    object: Endpoint
    scope: Scope


@dataclass
class SOI:
    """Solver variables plus inequalities, with a reverse index for worklist resets."""

    dim: int
    vars: list[SolverVar]
    init: dict[SolverVar, InitBound]
    inequalities: list[Propagation | Subsumption]
    edges: list[PatternEdge] = field(default_factory=list)
    dependents: dict[SolverVar, list[int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.inequalities = [
            _with_index(eq, i) for i, eq in enumerate(self.inequalities)
        ]
        self.dependents = {v: [] for v in self.vars}
        for eq in self.inequalities:
            key = eq.source if isinstance(eq, Propagation) else eq.upper
            self.dependents[key].append(eq.index)

    @property
    def propagations(self) -> list[Propagation]:
        return [e for e in self.inequalities if isinstance(e, Propagation)]

    @property
    def subsumptions(self) -> list[Subsumption]:
        return [e for e in self.inequalities if isinstance(e, Subsumption)]

    def originals(self) -> dict[str, list[SolverVar]]:
        """Original variable name -> all solver variables standing for it."""
        out: dict[str, list[SolverVar]] = {}
        for v in self.vars:
            out.setdefault(v.base, []).append(v)
        return out

    def dump(self) -> str:
        lines = [str(self.init[v]) for v in self.vars]
        lines += [str(e) for e in self.inequalities]
        return "\n".join(lines) + ("\n" if lines else "")


def _with_index(eq, i: int):
    if isinstance(eq, Propagation):
        return Propagation(eq.target, eq.source, eq.label, eq.direction, i)
    return Subsumption(eq.lower, eq.upper, i)


def _collect_scopes(ast: Query) -> tuple[dict[Scope, list[TriplePattern]], dict[Scope, Scope]]:
    triples: dict[Scope, list[TriplePattern]] = {None: []}
    parent: dict[Scope, Scope] = {None: None}

    def go(node: Query, scope: Scope) -> None:
        if isinstance(node, Bgp):
            triples[scope].extend(node.triples)
        elif isinstance(node, And):
            go(node.left, scope)
            go(node.right, scope)
        elif isinstance(node, Optional):
            go(node.left, scope)
            inner = node.right.qid
            triples[inner] = []
            parent[inner] = scope
            go(node.right, inner)
        elif isinstance(node, Union):
            raise ValueError("compile expects a union-free query; use to_union_free first")
        else:
            raise TypeError(f"not a query node: {node!r}")

    go(ast, None)
    return triples, parent


def _ancestors(scope: Scope, parent: dict[Scope, Scope]) -> Iterable[Scope]:
    while scope is not None:
        scope = parent[scope]
        yield scope


def compile(ast: Query, db: GraphDatabase) -> SOI:
    """Build the SOI of a union-free query against ``db``."""
    scope_triples, parent = _collect_scopes(ast)
    n = db.node_count
    scope_vars: dict[Scope, list[str]] = {}
    for s, ts in scope_triples.items():
        names: dict[str, None] = {}
        for t in ts:
            for term in (t.subject, t.object):
                if isinstance(term, Var):
                    names.setdefault(term.name)
        scope_vars[s] = list(names)

    def sv(name: str, scope: Scope) -> SolverVar:
        return SolverVar(name, scope)

    solver_vars = [sv(v, s) for s, names in scope_vars.items() for v in names]
    bounds = {v: BitVector.ones(n) for v in solver_vars}

    def endpoint(term, scope: Scope) -> Endpoint:
        if isinstance(term, Var):
            return sv(term.name, scope)
        return db.resolve_term(term.term)

    dead: set[Scope] = set()
    edges: list[PatternEdge] = []
    props: list[Propagation] = []
    seen: set[tuple] = set()
    for s, ts in scope_triples.items():
        for t in ts:
            a = t.predicate
            subj, obj = endpoint(t.subject, s), endpoint(t.object, s)
            edge = PatternEdge(subj, a, obj, s)
            if edge in seen:
                continue
            seen.add(edge)
            edges.append(edge)
            f, b = db.adjacency(a, "forward"), db.adjacency(a, "backward")
            sub_var, obj_var = isinstance(subj, SolverVar), isinstance(obj, SolverVar)
            if sub_var:
                bounds[subj] &= row_summary(f)
            if obj_var:
                bounds[obj] &= col_summary(f)
            if sub_var and obj_var:
                props.append(Propagation(obj, subj, a, "forward"))
                props.append(Propagation(subj, obj, a, "backward"))
            elif sub_var:
                bounds[subj] &= _const_row(b, obj, n)
            elif obj_var:
                bounds[obj] &= _const_row(f, subj, n)
            elif subj is None or obj is None or not f[subj, obj]:
                dead.add(s)

    subs: list[Subsumption] = []
    for s, names in scope_vars.items():
        if s is None:
            continue
        for v in names:
            for t in _ancestors(s, parent):
                if v in scope_vars[t]:
                    subs.append(Subsumption(sv(v, s), sv(v, t)))
                    break

    for v in solver_vars:
        if v.scope in dead or any(a in dead for a in _ancestors(v.scope, parent)):
            bounds[v] = BitVector.zeros(n)
    init = {v: InitBound(v, bounds[v], i) for i, v in enumerate(solver_vars)}
    return SOI(n, solver_vars, init, props + subs, edges)


def _const_row(m: BitMatrix, node: int | None, n: int) -> BitVector:
    return BitVector.zeros(n) if node is None else m.row(node)


def compile_bgp(bgp: Bgp, db: GraphDatabase) -> SOI:
    """SOI of a single basic graph pattern."""
    return compile(bgp, db)


def project_solution(solution: dict[SolverVar, BitVector], soi: SOI) -> dict[str, BitVector]:
    """Candidates per original variable.

    A variable with a root-scope occurrence reports that vector.  A variable
    that only occurs on optional sides reports the union of its surrogates.
    """
    out: dict[str, BitVector] = {}
    for name, svs in soi.originals().items():
        root = SolverVar(name)
        if root in solution:
            out[name] = solution[root].copy()
            continue
        acc = BitVector.zeros(soi.dim)
        for v in svs:
            acc = acc | solution[v]
        out[name] = acc
    return out
