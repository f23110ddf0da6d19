"""
distance.py - elimdist: Exact Elimination Distances

Core Idea: "Follow the Definition, Remember Every Subgraph"
===========================================================
The three distances differ only in what they do when G is disconnected or
already has the property:

    | Variant | G |= phi | connected, G !|= phi | disconnected           |
    |---------|----------|----------------------|------------------------|
    | conn    | 0 (*)    | 1 + min_v ed(G - v)  | max over components    |
    | prop    | 0        | 1 + min_v ed(G - v)  | max(1, max over comps) |
    | depth   | min d: some X of depth <= d-1 has G - X |= phi          |

    (*) for conn the test is made per component

The empty graph is at distance 0 from everything.

Each recursion revisits the same induced subgraphs over and over, so an
ExactSolver keys everything on vertex bitmasks: truth values of phi, values
of the recursions, and depth searches are computed once per mask.

Second opinion from elimination sets
------------------------------------
The *_via_sets functions decide the same questions from the other side:

    ed_conn(G) <= k  iff  some X of depth <= k-1 leaves only components
                          that model phi
    ed_prop(G) <= k  iff  some X has a representation of depth <= k-1
                          meeting the anchor conditions
                          (connected G, G !|= phi)

Both scan subsets of V(G), so they share the exact-mode size cap.
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations

from . import config
from .elimination import (
    DepthSearch, EliminationRepresentation, PropSearch, check_prop_conditions,
    validate_representation,
)
from .errors import PreconditionError, SizeCapExceeded
from .formula import Formula
from .graph import GraphLike, bits, component_masks, is_connected, to_mask, to_sorted
from .modelcheck import Evaluator, evaluator_for, satisfies


class Variant(str, Enum):
    CONN = "conn"
    PROP = "prop"
    DEPTH = "depth"


# =============================================================================
# Queries, results and witnesses
# =============================================================================

@dataclass(frozen=True)
class WitnessPart:
    """An elimination set inside one region (a component of G, or all of G)."""
    region: int
    representation: EliminationRepresentation

    @property
    def vertex_set(self) -> int:
        return self.representation.vertex_set

    def to_json(self) -> dict:
        return {
            "region": to_sorted(self.region),
            "set": to_sorted(self.vertex_set),
            "representation": self.representation.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "WitnessPart":
        part = cls(to_mask(obj["region"]), EliminationRepresentation.from_json(obj["representation"]))
        if "set" in obj and to_mask(obj["set"]) != part.vertex_set:
            raise PreconditionError("witness set does not match its representation")
        return part


@dataclass(frozen=True)
class Witness:
    variant: Variant
    k: int
    parts: tuple = ()

    @property
    def vertex_set(self) -> int:
        mask = 0
        for part in self.parts:
            mask |= part.vertex_set
        return mask

    def to_json(self) -> dict:
        return {
            "variant": self.variant.value,
            "k": self.k,
            "parts": [part.to_json() for part in self.parts],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Witness":
        return cls(Variant(obj["variant"]), int(obj["k"]),
                   tuple(WitnessPart.from_json(p) for p in obj["parts"]))


@dataclass(frozen=True)
class DistanceQuery:
    graph: GraphLike
    formula: Formula
    variant: Variant
    k: int | None = None

    def __post_init__(self):
        if not self.formula.is_sentence:
            raise PreconditionError("distance queries need a sentence")
        if self.k is not None and self.k < 0:
            raise PreconditionError("k must be non-negative")


@dataclass(frozen=True)
class DistanceResult:
    """`value` is set for exact queries, `verdict` for "ed <= k" queries."""
    value: int | None = None
    verdict: bool | None = None
    witness: Witness | None = field(default=None, compare=False)


# =============================================================================
# Exact solver
# =============================================================================

def check_size(g: GraphLike, cap: int | None = None) -> None:
    limit = config.resolve_cap(cap, "SIZE_CAP")
    if len(g) > limit:
        raise SizeCapExceeded(
            f"exact mode is capped at {limit} vertices, graph has {len(g)} "
            f"(raise it with --cap or ELIMDIST_SIZE_CAP)"
        )


def subsets_by_size(mask: int, max_size: int | None = None):
    """Subsets of `mask` in order of size, then lexicographically by vertex id."""
    verts = to_sorted(mask)
    top = len(verts) if max_size is None else min(max_size, len(verts))
    for size in range(top + 1):
        for combo in combinations(verts, size):
            yield to_mask(combo)


class ExactSolver:
    """Memoized recursions for one graph and one evaluator."""

    def __init__(self, g: GraphLike, evaluator: Evaluator):
        self.parent = g.parent
        self.mask = g.mask
        self.adj = g.parent.adj
        self.evaluator = evaluator
        self.truth = {}
        self.memo = {}
        self.depths = DepthSearch(self.adj)

    def holds(self, mask: int) -> bool:
        if mask not in self.truth:
            self.truth[mask] = satisfies(self.parent.view(mask), self.evaluator)
        return self.truth[mask]

    def all_components_hold(self, mask: int) -> bool:
        return all(self.holds(c) for c in component_masks(self.adj, mask))

    # -- exact values ----------------------------------------------------------

    def conn(self, mask: int) -> int:
        key = ("conn", mask)
        if key in self.memo:
            return self.memo[key]
        comps = component_masks(self.adj, mask)
        if not mask:
            value = 0
        elif len(comps) > 1:
            value = max(self.conn(c) for c in comps)
        elif self.holds(mask):
            value = 0
        else:
            value = 1 + min(self.conn(mask & ~(1 << v)) for v in bits(mask))
        self.memo[key] = value
        return value

    def prop(self, mask: int) -> int:
        key = ("prop", mask)
        if key in self.memo:
            return self.memo[key]
        if self.holds(mask):
            value = 0
        else:
            comps = component_masks(self.adj, mask)
            if len(comps) == 1:
                value = 1 + min(self.prop(mask & ~(1 << v)) for v in bits(mask))
            else:
                value = max(1, max(self.prop(c) for c in comps))
        self.memo[key] = value
        return value

    def depth_value(self) -> int:
        if self.holds(self.mask):
            return 0
        d = 1
        while self.depth_set(d) is None:
            d += 1
        return d

    # -- bounded versions --------------------------------------------------------

    def conn_at_most(self, mask: int, k: int) -> bool:
        key = ("conn<=", mask, k)
        if key in self.memo:
            return self.memo[key]
        comps = component_masks(self.adj, mask)
        if not mask:
            result = True
        elif len(comps) > 1:
            result = all(self.conn_at_most(c, k) for c in comps)
        elif self.holds(mask):
            result = True
        else:
            result = k > 0 and any(self.conn_at_most(mask & ~(1 << v), k - 1) for v in bits(mask))
        self.memo[key] = result
        return result

    def prop_at_most(self, mask: int, k: int) -> bool:
        key = ("prop<=", mask, k)
        if key in self.memo:
            return self.memo[key]
        if self.holds(mask):
            result = True
        elif k == 0:
            result = False
        else:
            comps = component_masks(self.adj, mask)
            if len(comps) == 1:
                result = any(self.prop_at_most(mask & ~(1 << v), k - 1) for v in bits(mask))
            else:
                result = all(self.prop_at_most(c, k) for c in comps)
        self.memo[key] = result
        return result

    def depth_set(self, k: int) -> tuple[int, dict] | None:
        """First X (by size, then ids) with depth(X) <= k-1 and G - X |= phi."""
        if k == 0:
            return (0, {}) if self.holds(self.mask) else None
        # depth 0 sets are singletons
        max_size = 1 if k == 1 else None
        for x in subsets_by_size(self.mask, max_size):
            forest = self.depths.represent(self.mask, x, k - 1)
            if forest is not None and self.holds(self.mask & ~x):
                return x, forest
        return None

    # -- elimination-set characterizations ---------------------------------------

    def conn_set(self, mask: int, k: int) -> tuple[int, dict] | None:
        """First X inside a connected `mask` with depth <= k-1 leaving only phi-components."""
        for x in subsets_by_size(mask):
            forest = self.depths.represent(mask, x, k - 1)
            if forest is not None and self.all_components_hold(mask & ~x):
                return x, forest
        return None

    def prop_set(self, mask: int, k: int) -> tuple[int, EliminationRepresentation] | None:
        search = PropSearch(self.parent.view(mask), self.evaluator)
        search.truth = self.truth
        for x in subsets_by_size(mask):
            if not x:
                continue
            rep = search.find(x, k)
            if rep is not None:
                return x, rep
        return None


def _solver(g: GraphLike, f: Formula, evaluator: Evaluator | None, cap: int | None) -> ExactSolver:
    check_size(g, cap)
    return ExactSolver(g, evaluator or evaluator_for(f))


# =============================================================================
# Exact values
# =============================================================================

def ed_conn(g: GraphLike, f: Formula, evaluator: Evaluator | None = None, cap: int | None = None) -> int:
    return _solver(g, f, evaluator, cap).conn(g.mask)


def ed_prop(g: GraphLike, f: Formula, evaluator: Evaluator | None = None, cap: int | None = None) -> int:
    return _solver(g, f, evaluator, cap).prop(g.mask)


def ed_depth(g: GraphLike, f: Formula, evaluator: Evaluator | None = None, cap: int | None = None) -> int:
    return _solver(g, f, evaluator, cap).depth_value()


# =============================================================================
# Bounded decisions: ed <= k
# =============================================================================

def _check_k(k: int):
    if k < 0:
        raise PreconditionError("k must be non-negative")


def ed_conn_at_most(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                    cap: int | None = None) -> bool:
    _check_k(k)
    return _solver(g, f, evaluator, cap).conn_at_most(g.mask, k)


def ed_prop_at_most(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                    cap: int | None = None) -> bool:
    _check_k(k)
    return _solver(g, f, evaluator, cap).prop_at_most(g.mask, k)


def ed_depth_at_most(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                     cap: int | None = None) -> bool:
    _check_k(k)
    return _solver(g, f, evaluator, cap).depth_set(k) is not None


def at_most(g: GraphLike, f: Formula, k: int, variant: Variant,
            evaluator: Evaluator | None = None, cap: int | None = None) -> bool:
    return {
        Variant.CONN: ed_conn_at_most,
        Variant.PROP: ed_prop_at_most,
        Variant.DEPTH: ed_depth_at_most,
    }[Variant(variant)](g, f, k, evaluator=evaluator, cap=cap)


def deletion_distance_at_most(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                              cap: int | None = None) -> tuple[bool, int | None]:
    """Is there X with |X| <= k and G - X |= phi? Returns the first such X."""
    _check_k(k)
    solver = _solver(g, f, evaluator, cap)
    for x in subsets_by_size(g.mask, k):
        if solver.holds(g.mask & ~x):
            return True, x
    return False, None


# =============================================================================
# Characterizations via elimination sets
# =============================================================================

def ed_conn_via_sets(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                     cap: int | None = None) -> tuple[bool, WitnessPart | None]:
    if not is_connected(g):
        raise PreconditionError("ed_conn_via_sets needs a connected graph")
    _check_k(k)
    found = _solver(g, f, evaluator, cap).conn_set(g.mask, k)
    if found is None:
        return False, None
    return True, WitnessPart(g.mask, EliminationRepresentation.from_forest(found[1]))


def ed_prop_via_sets(g: GraphLike, f: Formula, k: int, evaluator: Evaluator | None = None,
                     cap: int | None = None) -> tuple[bool, WitnessPart | None]:
    """Only meaningful when G !|= phi; the caller checks that first."""
    if not is_connected(g):
        raise PreconditionError("ed_prop_via_sets needs a connected graph")
    if k < 1:
        raise PreconditionError("ed_prop_via_sets needs k >= 1")
    solver = _solver(g, f, evaluator, cap)
    if solver.holds(g.mask):
        raise PreconditionError("G already models phi; ed_prop is 0")
    found = solver.prop_set(g.mask, k)
    if found is None:
        return False, None
    return True, WitnessPart(g.mask, found[1])


# =============================================================================
# Witnesses
# =============================================================================

def witness_at_most(g: GraphLike, f: Formula, k: int, variant: Variant,
                    evaluator: Evaluator | None = None, cap: int | None = None) -> Witness | None:
    """A certificate for ed_variant(G) <= k, or None when the bound fails."""
    _check_k(k)
    variant = Variant(variant)
    solver = _solver(g, f, evaluator, cap)
    parts = []
    if variant == Variant.DEPTH:
        found = solver.depth_set(k)
        if found is None:
            return None
        x, forest = found
        if x:
            parts.append(WitnessPart(g.mask, EliminationRepresentation.from_forest(forest)))
        return Witness(variant, k, tuple(parts))
    if variant == Variant.PROP and solver.holds(g.mask):
        return Witness(variant, k, ())
    if variant == Variant.PROP and k == 0:
        return None
    for comp in component_masks(solver.adj, g.mask):
        if solver.holds(comp):
            continue
        if variant == Variant.CONN:
            found = solver.conn_set(comp, k)
            rep = None if found is None else EliminationRepresentation.from_forest(found[1])
        else:
            found = solver.prop_set(comp, k)
            rep = None if found is None else found[1]
        if rep is None:
            return None
        parts.append(WitnessPart(comp, rep))
    return Witness(variant, k, tuple(parts))


def validate_witness(g: GraphLike, f: Formula, witness: Witness,
                     evaluator: Evaluator | None = None) -> bool:
    """Re-check a witness from scratch against the variant's characterization."""
    ev = evaluator or evaluator_for(f)
    parent = g.parent

    def holds(mask: int) -> bool:
        return satisfies(parent.view(mask), ev)

    k = witness.k
    if witness.variant == Variant.DEPTH:
        if len(witness.parts) > 1:
            return False
        if not witness.parts:
            return holds(g.mask)
        part = witness.parts[0]
        rep = part.representation
        return (part.region == g.mask and rep.vertex_set & ~g.mask == 0
                and validate_representation(g, rep) and rep.depth <= k - 1
                and holds(g.mask & ~rep.vertex_set))

    if witness.variant == Variant.PROP and holds(g.mask):
        return True
    comps = component_masks(parent.adj, g.mask)
    by_region = {part.region: part for part in witness.parts}
    if len(by_region) != len(witness.parts) or set(by_region) - set(comps):
        return False
    if witness.variant == Variant.PROP and k < 1:
        return False
    for comp in comps:
        part = by_region.get(comp)
        if part is None:
            if not holds(comp):
                return False
            continue
        rep = part.representation
        region = parent.view(comp)
        if not rep or rep.vertex_set & ~comp:
            return False
        if witness.variant == Variant.CONN:
            if not validate_representation(region, rep) or rep.depth > k - 1:
                return False
            rest = comp & ~rep.vertex_set
            if not all(holds(c) for c in component_masks(parent.adj, rest)):
                return False
        elif not check_prop_conditions(region, rep, k, f, evaluator=ev):
            return False
    return True


# =============================================================================
# Queries
# =============================================================================

_EXACT = {Variant.CONN: ed_conn, Variant.PROP: ed_prop, Variant.DEPTH: ed_depth}


def solve(query: DistanceQuery, with_witness: bool = False, evaluator: Evaluator | None = None,
          cap: int | None = None) -> DistanceResult:
    g, f, variant = query.graph, query.formula, Variant(query.variant)
    if query.k is None:
        value = _EXACT[variant](g, f, evaluator=evaluator, cap=cap)
        witness = witness_at_most(g, f, value, variant, evaluator, cap) if with_witness else None
        return DistanceResult(value=value, witness=witness)
    if with_witness:
        witness = witness_at_most(g, f, query.k, variant, evaluator, cap)
        return DistanceResult(verdict=witness is not None, witness=witness)
    return DistanceResult(verdict=at_most(g, f, query.k, variant, evaluator, cap))

