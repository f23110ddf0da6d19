"""
msol.py - elimdist: Distances as Monadic Second-Order Sentences

Core Idea: "ed <= k Is a Sentence, Too"
=======================================
For every first-order phi and every k there is an MSOL sentence psi_k that
holds exactly on the graphs with ed(G) <= k. This module builds those
sentences and evaluates them naively, which gives a third, independent
opinion next to the recursive solver and the elimination-set search.

    conn   psi_0 = AX (comp(X) -> phi(X))
           psi_k = psi_{k-1} | AX (comp(X) -> (phi(X) | E x (x in X & psi_{k-1}(X - x))))

    prop   psi_0 = phi
           psi_k = psi_{k-1} | AX (comp(X) -> (psi_{k-1}(X) | E x (x in X & psi_{k-1}(X - x))))

    depth  psi_k = EX (xt_{k-1}(X) & phi(co(X)))

where xt_d(X) says "X has depth <= d" and xi_d(X) says the same through
nice representations of a connected graph:

    xi_-1(X) = (X = {})          xi_0(X) = xi_-1(X) | |X| = 1
    xi_d(X)  = xi_{d-1}(X) | E x (x in X & AY ((comp(Y, x) & !(X & Y = {}))
                                               -> xi_{d-1}(X & Y, Y)))
    xt_d(X)  = xt_{d-1}(X) | EY (comp(Y) & xi_d(X & Y, Y)
                                 & AZ ((comp(Z) & !(Z = Y)) -> xt_{d-1}(X & Z, Z)))

"psi(S)" and "xi(T, S)" evaluate inside the induced subgraph G[S]. The
recursion would copy psi_{k-1} several times per level; instead the AST is
a DAG and each level is a Named node that is shared, so the size grows
linearly in k and render_msol() prints each definition once.

Evaluation enumerates all 2^n subsets per set quantifier; graphs are capped
at MSOL_CAP vertices.
"""

from dataclasses import dataclass
from typing import Union

from . import config
from .distance import Variant
from .errors import PreconditionError, SizeCapExceeded
from .formula import Formula, render_formula
from .graph import GraphLike, bits, component_masks
from .modelcheck import evaluator_for, satisfies


# =============================================================================
# AST
# =============================================================================
# Nodes compare by identity: the formulas are DAGs and sharing is the point.

@dataclass(frozen=True, eq=False)
class SetVar:
    name: str


@dataclass(frozen=True, eq=False)
class Universe:
    """V of the graph the enclosing formula is evaluated in."""


@dataclass(frozen=True, eq=False)
class SetMinusVertex:
    set: "SetTerm"
    vertex: str


@dataclass(frozen=True, eq=False)
class SetIntersect:
    left: "SetTerm"
    right: "SetTerm"


@dataclass(frozen=True, eq=False)
class Complement:
    set: "SetTerm"


SetTerm = Union[SetVar, Universe, SetMinusVertex, SetIntersect, Complement]


@dataclass(frozen=True, eq=False)
class MsolAnd:
    operands: tuple


@dataclass(frozen=True, eq=False)
class MsolOr:
    operands: tuple


@dataclass(frozen=True, eq=False)
class MsolNot:
    operand: "MsolFormula"


@dataclass(frozen=True, eq=False)
class MsolImplies:
    left: "MsolFormula"
    right: "MsolFormula"


@dataclass(frozen=True, eq=False)
class ForallSet:
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class ExistsSet:
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class ForallVertex:
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class ExistsVertex:
    var: str
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class Member:
    vertex: str
    set: SetTerm


@dataclass(frozen=True, eq=False)
class SetEmpty:
    set: SetTerm


@dataclass(frozen=True, eq=False)
class Singleton:
    set: SetTerm


@dataclass(frozen=True, eq=False)
class SetEqual:
    left: SetTerm
    right: SetTerm


@dataclass(frozen=True, eq=False)
class Comp:
    """`set` is a component of G, or of G - without when a vertex variable is given."""
    set: SetTerm
    without: str | None = None


@dataclass(frozen=True, eq=False)
class Models:
    """G[on] |= formula; the empty graph counts as a model."""
    formula: Formula
    on: SetTerm


@dataclass(frozen=True, eq=False)
class Relativized:
    body: "MsolFormula"
    on: SetTerm


@dataclass(frozen=True, eq=False)
class Bind:
    var: str
    term: SetTerm
    body: "MsolFormula"


@dataclass(frozen=True, eq=False)
class Named:
    name: str
    params: tuple
    body: "MsolFormula"


MsolFormula = Union[
    MsolAnd, MsolOr, MsolNot, MsolImplies, ForallSet, ExistsSet, ForallVertex, ExistsVertex,
    Member, SetEmpty, Singleton, SetEqual, Comp, Models, Relativized, Bind, Named,
]

_V = Universe()
_X, _Y, _Z = SetVar("X"), SetVar("Y"), SetVar("Z")


def _or(*ops):
    return MsolOr(tuple(ops))


def _and(*ops):
    return MsolAnd(tuple(ops))


# =============================================================================
# Emitting psi_k
# =============================================================================

def _nice_chain(d: int) -> list:
    """[xi_-1, xi_0, ..., xi_d], each level referring to the previous one."""
    chain = [SetEmpty(_X)]
    for level in range(0, d + 1):
        current = chain[-1]
        if level == 0:
            body = _or(current, Singleton(_X))
        else:
            inner = Relativized(Bind("X", SetIntersect(_X, _Y), current), _Y)
            guard = _and(Comp(_Y, "x"), MsolNot(SetEmpty(SetIntersect(_X, _Y))))
            body = _or(current, ExistsVertex("x", _and(Member("x", _X), ForallSet("Y", MsolImplies(guard, inner)))))
        chain.append(Named(f"xi{level}", ("X",), body))
    return chain


def nice_depth_formula(d: int) -> MsolFormula:
    """xi_d(X): X has a nice representation of depth <= d (connected graphs)."""
    if d < -1:
        raise PreconditionError("depth bound must be at least -1")
    return _nice_chain(d)[-1]


def depth_formula(d: int) -> MsolFormula:
    """xt_d(X): the elimination set X has depth <= d."""
    if d < -1:
        raise PreconditionError("depth bound must be at least -1")
    nice = _nice_chain(d)
    current = SetEmpty(_X)
    for level in range(0, d + 1):
        if level == 0:
            body = _or(current, Singleton(_X))
        else:
            main = Relativized(Bind("X", SetIntersect(_X, _Y), nice[level + 1]), _Y)
            rest = Relativized(Bind("X", SetIntersect(_X, _Z), current), _Z)
            others = ForallSet("Z", MsolImplies(_and(Comp(_Z), MsolNot(SetEqual(_Z, _Y))), rest))
            body = _or(current, ExistsSet("Y", _and(Comp(_Y), main, others)))
        current = Named(f"xt{level}", ("X",), body)
    return current


def _emit_conn(f: Formula, k: int) -> MsolFormula:
    phi_x = Models(f, _X)
    current = Named("psi0", (), ForallSet("X", MsolImplies(Comp(_X), phi_x)))
    for level in range(1, k + 1):
        step = ExistsVertex("x", _and(Member("x", _X), Relativized(current, SetMinusVertex(_X, "x"))))
        body = _or(current, ForallSet("X", MsolImplies(Comp(_X), _or(phi_x, step))))
        current = Named(f"psi{level}", (), body)
    return current


def _emit_prop(f: Formula, k: int) -> MsolFormula:
    current = Models(f, _V)
    for level in range(1, k + 1):
        step = ExistsVertex("x", _and(Member("x", _X), Relativized(current, SetMinusVertex(_X, "x"))))
        body = _or(current, ForallSet("X", MsolImplies(Comp(_X), _or(Relativized(current, _X), step))))
        current = Named(f"psi{level}", (), body)
    return current


def _emit_depth(f: Formula, k: int) -> MsolFormula:
    return ExistsSet("X", _and(depth_formula(k - 1), Models(f, Complement(_X))))


def emit_msol(f: Formula, k: int, variant: Variant) -> MsolFormula:
    if k < 0:
        raise PreconditionError("k must be non-negative")
    if not f.is_sentence:
        raise PreconditionError("emit_msol needs a sentence")
    return {
        Variant.CONN: _emit_conn,
        Variant.PROP: _emit_prop,
        Variant.DEPTH: _emit_depth,
    }[Variant(variant)](f, k)


# =============================================================================
# Evaluation
# =============================================================================

class _Evaluator:
    def __init__(self, g: GraphLike, memo: bool):
        self.parent = g.parent
        self.adj = g.parent.adj
        self.comps = {}
        self.truth = {}
        self.evaluators = {}
        self.memo = {} if memo else None

    def components(self, universe: int) -> list[int]:
        if universe not in self.comps:
            self.comps[universe] = component_masks(self.adj, universe)
        return self.comps[universe]

    def models(self, f: Formula, mask: int) -> bool:
        key = (id(f), mask)
        if key not in self.truth:
            if id(f) not in self.evaluators:
                self.evaluators[id(f)] = evaluator_for(f)
            self.truth[key] = satisfies(self.parent.view(mask), self.evaluators[id(f)])
        return self.truth[key]

    def term(self, t, env: dict, universe: int) -> int:
        if isinstance(t, SetVar):
            if t.name not in env:
                raise PreconditionError(f"set variable {t.name} is not bound")
            return env[t.name]
        if isinstance(t, Universe):
            return universe
        if isinstance(t, SetMinusVertex):
            return self.term(t.set, env, universe) & ~(1 << env[t.vertex])
        if isinstance(t, SetIntersect):
            return self.term(t.left, env, universe) & self.term(t.right, env, universe)
        return universe & ~self.term(t.set, env, universe)

    def run(self, m, env: dict, universe: int) -> bool:
        if isinstance(m, MsolAnd):
            return all(self.run(op, env, universe) for op in m.operands)
        if isinstance(m, MsolOr):
            return any(self.run(op, env, universe) for op in m.operands)
        if isinstance(m, MsolNot):
            return not self.run(m.operand, env, universe)
        if isinstance(m, MsolImplies):
            return not self.run(m.left, env, universe) or self.run(m.right, env, universe)
        if isinstance(m, (ForallSet, ExistsSet)):
            want = isinstance(m, ExistsSet)
            for sub in _submasks(universe):
                if self.run(m.body, {**env, m.var: sub}, universe) == want:
                    return want
            return not want
        if isinstance(m, (ForallVertex, ExistsVertex)):
            want = isinstance(m, ExistsVertex)
            for v in bits(universe):
                if self.run(m.body, {**env, m.var: v}, universe) == want:
                    return want
            return not want
        if isinstance(m, Member):
            return bool(self.term(m.set, env, universe) >> env[m.vertex] & 1)
        if isinstance(m, SetEmpty):
            return self.term(m.set, env, universe) == 0
        if isinstance(m, Singleton):
            return self.term(m.set, env, universe).bit_count() == 1
        if isinstance(m, SetEqual):
            return self.term(m.left, env, universe) == self.term(m.right, env, universe)
        if isinstance(m, Comp):
            inside = universe if m.without is None else universe & ~(1 << env[m.without])
            return self.term(m.set, env, universe) in self.components(inside)
        if isinstance(m, Models):
            return self.models(m.formula, self.term(m.on, env, universe))
        if isinstance(m, Relativized):
            return self.run(m.body, env, self.term(m.on, env, universe))
        if isinstance(m, Bind):
            return self.run(m.body, {**env, m.var: self.term(m.term, env, universe)}, universe)
        if isinstance(m, Named):
            return self.named(m, env, universe)
        raise PreconditionError(f"unknown MSOL node {type(m).__name__}")

    def named(self, m: Named, env: dict, universe: int) -> bool:
        if self.memo is None:
            return self.run(m.body, {p: env[p] for p in m.params}, universe)
        key = (id(m), universe, tuple(env[p] for p in m.params))
        if key not in self.memo:
            self.memo[key] = self.run(m.body, {p: env[p] for p in m.params}, universe)
        return self.memo[key]


def _submasks(mask: int):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def eval_msol(g: GraphLike, m: MsolFormula, assignment: dict | None = None,
              cap: int | None = None, memo: bool = False) -> bool:
    """
    Truth of m on g. `assignment` interprets free variables: set variables
    as vertex masks, vertex variables as vertex ids. With memo=True, Named
    subformulas are cached per (universe, arguments).
    """
    limit = config.resolve_cap(cap, "MSOL_CAP")
    if len(g) > limit:
        raise SizeCapExceeded(f"MSOL evaluation is capped at {limit} vertices, graph has {len(g)}")
    return _Evaluator(g, memo).run(m, dict(assignment or {}), g.mask)


# =============================================================================
# Size and rendering
# =============================================================================

def _children(m) -> tuple:
    if isinstance(m, (MsolAnd, MsolOr)):
        return m.operands
    if isinstance(m, MsolNot):
        return (m.operand,)
    if isinstance(m, MsolImplies):
        return (m.left, m.right)
    if isinstance(m, (ForallSet, ExistsSet, ForallVertex, ExistsVertex, Named)):
        return (m.body,)
    if isinstance(m, (Member, SetEmpty, Singleton, Complement, SetMinusVertex)):
        return (m.set,)
    if isinstance(m, (SetEqual, SetIntersect)):
        return (m.left, m.right)
    if isinstance(m, Comp):
        return (m.set,)
    if isinstance(m, Models):
        return (m.on,)
    if isinstance(m, Relativized):
        return (m.body, m.on)
    if isinstance(m, Bind):
        return (m.term, m.body)
    return ()


def node_count(m: MsolFormula) -> int:
    """Distinct nodes of the DAG."""
    seen, stack = set(), [m]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.extend(_children(node))
    return len(seen)


def _render_term(t) -> str:
    if isinstance(t, SetVar):
        return t.name
    if isinstance(t, Universe):
        return "V"
    if isinstance(t, SetMinusVertex):
        return f"({_render_term(t.set)} - {t.vertex})"
    if isinstance(t, SetIntersect):
        return f"({_render_term(t.left)} & {_render_term(t.right)})"
    return f"co({_render_term(t.set)})"


def _call(name: str, args: list[str]) -> str:
    return f"{name}({', '.join(args)})" if args else name


class _Renderer:
    def __init__(self):
        self.definitions = {}
        self.uses_phi = None

    def define(self, m: Named):
        if m.name not in self.definitions:
            self.definitions[m.name] = None
            self.definitions[m.name] = self.render(m.body)

    def render(self, m) -> str:
        if isinstance(m, MsolAnd):
            return "(" + " & ".join(self.render(op) for op in m.operands) + ")"
        if isinstance(m, MsolOr):
            return "(" + " | ".join(self.render(op) for op in m.operands) + ")"
        if isinstance(m, MsolNot):
            return "!" + self.render(m.operand)
        if isinstance(m, MsolImplies):
            return f"({self.render(m.left)} -> {self.render(m.right)})"
        if isinstance(m, ForallSet):
            return f"A{m.var} {self.render(m.body)}"
        if isinstance(m, ExistsSet):
            return f"E{m.var} {self.render(m.body)}"
        if isinstance(m, ForallVertex):
            return f"A {m.var} {self.render(m.body)}"
        if isinstance(m, ExistsVertex):
            return f"E {m.var} {self.render(m.body)}"
        if isinstance(m, Member):
            return f"({m.vertex} in {_render_term(m.set)})"
        if isinstance(m, SetEmpty):
            return f"({_render_term(m.set)} = {{}})"
        if isinstance(m, Singleton):
            return f"(|{_render_term(m.set)}| = 1)"
        if isinstance(m, SetEqual):
            return f"({_render_term(m.left)} = {_render_term(m.right)})"
        if isinstance(m, Comp):
            args = [_render_term(m.set)] + ([m.without] if m.without else [])
            return _call("comp", args)
        if isinstance(m, Models):
            self.uses_phi = m.formula
            return "phi" if isinstance(m.on, Universe) else f"phi({_render_term(m.on)})"
        if isinstance(m, Named):
            self.define(m)
            return _call(m.name, list(m.params))
        if isinstance(m, Bind) and isinstance(m.body, Named) and m.body.params == (m.var,):
            self.define(m.body)
            return _call(m.body.name, [_render_term(m.term)])
        if isinstance(m, Bind):
            return f"[{m.var} := {_render_term(m.term)}] {self.render(m.body)}"
        return self._render_relativized(m)

    def _render_relativized(self, m: Relativized) -> str:
        on = _render_term(m.on)
        body = m.body
        if isinstance(body, Named) and not body.params:
            self.define(body)
            return _call(body.name, [on])
        if isinstance(body, Bind) and isinstance(body.body, Named) and body.body.params == (body.var,):
            self.define(body.body)
            return _call(body.body.name, [_render_term(body.term), on])
        if isinstance(body, Models) and isinstance(body.on, Universe):
            self.uses_phi = body.formula
            return f"phi({on})"
        return f"({self.render(body)}) @ {on}"


def render_msol(m: MsolFormula) -> str:
    """
    Definition lines "name := body" (phi first, then in order of first use,
    innermost first), followed by the sentence itself.
    """
    if isinstance(m, Models) and isinstance(m.on, Universe):
        return render_formula(m.formula)
    r = _Renderer()
    if isinstance(m, Named):
        r.define(m)
        top = r.definitions.pop(m.name)
    else:
        top = r.render(m)
    lines = []
    if r.uses_phi is not None:
        lines.append(f"phi := {render_formula(r.uses_phi)}")
    lines.extend(f"{name} := {body}" for name, body in _definition_order(r.definitions))
    lines.append(top)
    return "\n".join(lines)


def _definition_order(definitions: dict) -> list:
    # a level only refers to lower levels
    return sorted(definitions.items(), key=lambda kv: _level_key(kv[0]))


def _level_key(name: str):
    head = name.rstrip("0123456789")
    return (int(name[len(head):]), head)
