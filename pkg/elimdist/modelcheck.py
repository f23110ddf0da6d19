"""
modelcheck.py - elimdist: First-Order Model Checking

Core Idea: "Expand Every Quantifier, but Only Once per Slot"
=============================================================
Deciding (G, v1..vr) |= phi[x1..xr] is brute force: each quantifier ranges
over the vertices of the (sub)graph, the matrix is evaluated at every leaf.
What we can control is the constant factor:

    1. Variables become dense integer slots: free vars first, then the
       prefix in order. The environment is one Python list.
    2. The matrix is compiled once into a flat postfix program,

           (x ~ y) | !(x = z)   ->   ADJ 1 2, EQ 1 3, NOT, OR 2

       and the program is then folded into a chain of closures, so
       evaluation short-circuits without an interpreter loop.
    3. A quantifier whose variable never reaches the matrix (padding
       dummies) is not expanded: it only checks that the domain is non-empty.

Quantifiers range over the view's vertex set: on the empty graph every A
holds and every E fails.

Catalog formulas also get hand-written bitset evaluators, used through
evaluator_for() by every solver. They are cross-checked against models().
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Callable

from .errors import ArityError, PreconditionError
from .formula import (
    CATALOG, Adjacent, And, Equal, Formula, Iff, Implies, Not, Or, QuantKind,
    catalog_formula, matrix_variables, strip_quantifiers,
)
from .graph import GraphLike, bits


# =============================================================================
# Structures
# =============================================================================

@dataclass(frozen=True)
class Structure:
    graph: GraphLike
    assignment: tuple = ()

    def __post_init__(self):
        for v in self.assignment:
            if v not in self.graph:
                raise PreconditionError(f"assigned vertex {v} is not in the structure")


# =============================================================================
# Compilation
# =============================================================================

EQ, ADJ, NOT, AND, OR, IMP, IFF = range(7)


def _emit(m, slots, out):
    if isinstance(m, Equal):
        out.append((EQ, slots[m.left], slots[m.right]))
    elif isinstance(m, Adjacent):
        out.append((ADJ, slots[m.left], slots[m.right]))
    elif isinstance(m, Not):
        _emit(m.operand, slots, out)
        out.append((NOT, 0, 0))
    elif isinstance(m, (And, Or)):
        for op in m.operands:
            _emit(op, slots, out)
        out.append((AND if isinstance(m, And) else OR, len(m.operands), 0))
    else:
        _emit(m.left, slots, out)
        _emit(m.right, slots, out)
        out.append((IMP if isinstance(m, Implies) else IFF, 0, 0))


def _leaf(op, a, b):
    if op == EQ:
        return lambda env, adj: env[a] == env[b]
    return lambda env, adj: (adj[env[a]] >> env[b]) & 1 == 1


def _fold(op, args):
    if op == NOT:
        (c,) = args
        return lambda env, adj: not c(env, adj)
    if op == IMP:
        l, r = args
        return lambda env, adj: (not l(env, adj)) or r(env, adj)
    if op == IFF:
        l, r = args
        return lambda env, adj: l(env, adj) == r(env, adj)
    if len(args) == 2:
        l, r = args
        if op == AND:
            return lambda env, adj: l(env, adj) and r(env, adj)
        return lambda env, adj: l(env, adj) or r(env, adj)
    args = tuple(args)
    if op == AND:
        return lambda env, adj: all(c(env, adj) for c in args)
    return lambda env, adj: any(c(env, adj) for c in args)


def _assemble(program):
    stack = []
    for op, a, b in program:
        if op in (EQ, ADJ):
            stack.append(_leaf(op, a, b))
            continue
        arity = a if op in (AND, OR) else (1 if op == NOT else 2)
        args = stack[-arity:]
        del stack[-arity:]
        stack.append(_fold(op, args))
    (matrix,) = stack
    return matrix


def _quantify(forall: bool, slot: int, used: bool, inner):
    if not used:
        if forall:
            return lambda env, adj, verts: not verts or inner(env, adj, verts)
        return lambda env, adj, verts: bool(verts) and inner(env, adj, verts)
    if forall:
        def run(env, adj, verts):
            for v in verts:
                env[slot] = v
                if not inner(env, adj, verts):
                    return False
            return True
    else:
        def run(env, adj, verts):
            for v in verts:
                env[slot] = v
                if inner(env, adj, verts):
                    return True
            return False
    return run


@dataclass(frozen=True)
class CompiledFormula:
    slots: dict
    program: tuple
    n_free: int
    run: Callable

    def evaluate(self, g: GraphLike, assignment=()) -> bool:
        env = list(assignment) + [0] * (len(self.slots) - self.n_free)
        return self.run(env, g.parent.adj, g.vertices())


@lru_cache(maxsize=512)
def compile_formula(f: Formula) -> CompiledFormula:
    slots = {var: i for i, var in enumerate(f.variables)}
    program = []
    _emit(f.matrix, slots, program)
    matrix = _assemble(program)
    used = matrix_variables(f.matrix)

    def body(env, adj, verts):
        return matrix(env, adj)

    run = body
    for q in reversed(f.prefix):
        run = _quantify(q.kind == QuantKind.FORALL, slots[q.variable], q.variable in used, run)
    return CompiledFormula(slots, tuple(program), len(f.free_vars), run)


# =============================================================================
# Model checking
# =============================================================================

def _check_arity(s: Structure, f: Formula):
    if len(s.assignment) != len(f.free_vars):
        raise ArityError(
            f"formula has {len(f.free_vars)} free variables, assignment has {len(s.assignment)}"
        )


def models(s: Structure, f: Formula) -> bool:
    _check_arity(s, f)
    return compile_formula(f).evaluate(s.graph, s.assignment)


def first_failing_tuple(s: Structure, f: Formula, block) -> tuple | None:
    """
    Lexicographically first u (by vertex id) with (G, v u) not |= phi[x y],
    where `block` names the leading universal variables y. None if s |= f.
    """
    _check_arity(s, f)
    block = tuple(block)
    if any(q.kind != QuantKind.FORALL for q in f.prefix[:len(block)]):
        raise PreconditionError("first_failing_tuple needs a leading universal block")
    rest = compile_formula(strip_quantifiers(f, block))
    verts = s.graph.vertices()
    for u in product(verts, repeat=len(block)):
        if not rest.evaluate(s.graph, s.assignment + u):
            return u
    return None


# =============================================================================
# Specialized evaluators
# =============================================================================

Evaluator = Callable[[GraphLike], bool]


def _triangle_free(g: GraphLike) -> bool:
    adj, mask = g.parent.adj, g.mask
    for u in bits(mask):
        higher = adj[u] & mask & ~((1 << (u + 1)) - 1)
        for v in bits(higher):
            if adj[v] & higher:
                return False
    return True


def _ball2(adj, mask: int, u: int) -> int:
    near = adj[u] & mask
    reach = near | (1 << u)
    for w in bits(near):
        reach |= adj[w] & mask
    return reach


def _diameter_le_2(g: GraphLike) -> bool:
    adj, mask = g.parent.adj, g.mask
    return all(_ball2(adj, mask, u) == mask for u in bits(mask))


def _hardness_dist2_degree1(g: GraphLike) -> bool:
    adj, mask = g.parent.adj, g.mask
    low = 0
    for v in bits(mask):
        if (adj[v] & mask).bit_count() <= 1:
            low |= 1 << v
    return all(_ball2(adj, mask, u) & low for u in bits(mask))


def _nonadjacent_pair(g: GraphLike) -> bool:
    adj, mask = g.parent.adj, g.mask
    return any(mask & ~adj[u] & ~(1 << u) for u in bits(mask))


def _all_equal(g: GraphLike) -> bool:
    return len(g) <= 1


SPECIALIZED = {
    "triangle_free": _triangle_free,
    "diameter_le_2": _diameter_le_2,
    "hardness_dist2_degree1": _hardness_dist2_degree1,
    "nonadjacent_pair": _nonadjacent_pair,
    "all_equal": _all_equal,
}


def specialized_evaluator(name: str) -> Evaluator:
    if name not in SPECIALIZED:
        raise PreconditionError(f"no specialized evaluator for {name!r}; known: {sorted(SPECIALIZED)}")
    return SPECIALIZED[name]


@lru_cache(maxsize=1)
def _catalog_by_formula() -> dict:
    return {catalog_formula(name): name for name in CATALOG}


def catalog_name(f: Formula) -> str | None:
    return _catalog_by_formula().get(f)


def generic_evaluator(f: Formula) -> Evaluator:
    if not f.is_sentence:
        raise PreconditionError("evaluators are built for sentences")
    compiled = compile_formula(f)
    return compiled.evaluate


def evaluator_for(f: Formula) -> Evaluator:
    """Fast path for catalog sentences, compiled generic evaluation otherwise."""
    name = catalog_name(f)
    return SPECIALIZED[name] if name else generic_evaluator(f)


def satisfies(g: GraphLike, evaluator: Evaluator) -> bool:
    """Distance-level satisfaction: a graph with no vertices is at distance 0."""
    return len(g) == 0 or evaluator(g)
