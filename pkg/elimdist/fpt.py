"""
fpt.py - elimdist: Branching Solvers for Unbreakable Graphs

Core Idea: "Color, Guess a Tuple, Chase the Failing Tuple"
==========================================================
On a (p,k)-unbreakable graph every solution X is small (|X| <= p+k) and
leaves one big component C with at most p vertices outside N[C]. The
solvers find C (or the deleted set directly) in three moves:

    1. Color.  A separating family supplies colorings in which the
       vertices far from C are red and the boundary N(C) is blue.
    2. Guess.  phi is E x.. A y.. E z..; try every tuple v for x and
       color it red, so it is never deleted.
    3. Chase.  While (C, v) fails phi[x], the first failing tuple u for y
       names the culprits: some u_j must leave C. A blue u_j is deleted;
       a red u_j takes its whole red component and that component's
       neighborhood with it. The budget h shrinks on every edge.

    FindC(C, h)   big component of ed_conn / ed_prop      depth <= k
    FindF(F, h)   G_x: the components anchored at leaf w   depth <= k
    FindX(Z, h)   the set X itself, for ed_depth          depth <= p+k

Every candidate is turned into a full solution by brute force over the at
most p vertices it leaves out, and re-checked with the exact
characterization before it is accepted, so a "yes" is always sound.

Graphs with at most (3p+2k)(p+1) vertices go to the exact solver.

Family members are independent; with jobs > 1 they run in a process pool
and the first member (in family order) that yields a solution wins, so the
verdict, witness and counters do not depend on the number of jobs.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from itertools import product
from typing import Callable

from . import config
from .distance import ExactSolver, Variant, Witness, WitnessPart, subsets_by_size
from .elimination import DepthSearch, EliminationRepresentation, PropSearch
from .errors import PreconditionError
from .formula import Formula, Sigma3Form, sigma3_form
from .graph import (
    GraphLike, bits, closure, component_containing, component_masks, components_touching,
    is_unbreakable, neighbors_of, popcount, to_mask, to_sorted,
)
from .modelcheck import Structure, evaluator_for, first_failing_tuple, satisfies
from .separation import build_family


def default_p(k: int) -> int:
    """Heuristic stand-in for the unbreakability parameter p(k)."""
    return 2 ** k


def exact_cutoff(p: int, k: int) -> int:
    return (3 * p + 2 * k) * (p + 1)


# =============================================================================
# Counters
# =============================================================================

@dataclass
class Counters:
    nodes: int = 0
    candidates: int = 0
    family_size: int = 0
    max_depth: int = 0
    max_branching: int = 0
    max_component_branching: int = 0
    tasks: int = 0

    def visit(self, depth: int):
        self.nodes += 1
        self.max_depth = max(self.max_depth, depth)

    def branched(self, children: int, by_component: bool = False):
        if by_component:
            self.max_component_branching = max(self.max_component_branching, children)
        else:
            self.max_branching = max(self.max_branching, children)

    def merge(self, other: "Counters"):
        self.nodes += other.nodes
        self.candidates += other.candidates
        self.family_size += other.family_size
        self.tasks += other.tasks
        self.max_depth = max(self.max_depth, other.max_depth)
        self.max_branching = max(self.max_branching, other.max_branching)
        self.max_component_branching = max(self.max_component_branching, other.max_component_branching)

    def to_dict(self) -> dict:
        return asdict(self)


Progress = Callable[[str, Counters], None]


# =============================================================================
# Colorings and candidates
# =============================================================================

@dataclass(frozen=True)
class Coloring:
    """Red R, yellow Y, blue B = universe - R - Y."""
    universe: int
    red: int
    yellow: int = 0

    def __post_init__(self):
        if (self.red | self.yellow) & ~self.universe:
            raise PreconditionError("colored vertices outside the universe")
        if self.red & self.yellow:
            raise PreconditionError("a vertex cannot be both red and yellow")

    @property
    def blue(self) -> int:
        return self.universe & ~self.red & ~self.yellow

    def is_red(self, v: int) -> bool:
        return bool(self.red >> v & 1)

    def is_yellow(self, v: int) -> bool:
        return bool(self.yellow >> v & 1)

    def is_blue(self, v: int) -> bool:
        return bool(self.blue >> v & 1)

    def with_red(self, vertices) -> "Coloring":
        """The same coloring with `vertices` recolored red."""
        mask = to_mask(vertices)
        return Coloring(self.universe, self.red | mask, self.yellow & ~mask)


@dataclass(frozen=True)
class Candidate:
    region: int
    boundary: int
    budget_used: int


def _form(f: Formula | Sigma3Form) -> Sigma3Form:
    return f if isinstance(f, Sigma3Form) else sigma3_form(f)


def _check_tuple(host: GraphLike, v_tuple: tuple, form: Sigma3Form):
    if len(v_tuple) != form.r:
        raise PreconditionError(f"expected {form.r} vertices for the leading E block, got {len(v_tuple)}")
    for v in v_tuple:
        if v not in host:
            raise PreconditionError(f"vertex {v} of the tuple is not in the host graph")


def _failing(parent, mask: int, v_tuple: tuple, form: Sigma3Form) -> tuple | None:
    return first_failing_tuple(Structure(parent.view(mask), v_tuple), form.phi_x, form.y_vars)


def _distinct(u: tuple) -> list[int]:
    return list(dict.fromkeys(u))


# =============================================================================
# FindC
# =============================================================================

def find_c(host: GraphLike, v_tuple, coloring: Coloring, f: Formula | Sigma3Form, k: int,
           counters: Counters | None = None) -> list[Candidate]:
    """
    Candidate big components C containing all of v with (C, v) |= phi[x],
    each with boundary N(C) in the host. Deduplicated, in discovery order.
    """
    form = _form(f)
    v_tuple = tuple(v_tuple)
    _check_tuple(host, v_tuple, form)
    counters = counters if counters is not None else Counters()
    parent, adj = host.parent, host.parent.adj
    vmask = to_mask(v_tuple)
    out = {}

    def search(c: int, h: int, level: int):
        counters.visit(level)
        fail = _failing(parent, c, v_tuple, form)
        if fail is None:
            if h >= 0:
                boundary = neighbors_of(adj, c, host.mask)
                out.setdefault((c, boundary), Candidate(c, boundary, k - h))
            return
        if h <= 0:
            return
        children = 0
        for u in _distinct(fail):
            if coloring.is_blue(u):
                nxt = component_containing(parent.view(c & ~(1 << u)), vmask)
                cost = 1
            else:
                w = closure(adj, coloring.red & c, 1 << u)
                s = neighbors_of(adj, w, c)
                cost = popcount(s)
                if cost > h:
                    continue
                nxt = component_containing(parent.view(c & ~(w | s)), vmask)
            if nxt:
                children += 1
                assert cost >= 1
                search(nxt, h - cost, level + 1)
        counters.branched(children)

    start = component_containing(host, vmask)
    if start:
        search(start, k, 0)
    counters.candidates += len(out)
    return list(out.values())


# =============================================================================
# FindF
# =============================================================================

def red_attachment(host: GraphLike, w: int, coloring: Coloring) -> int:
    """W: union of the red components of the host adjacent to w."""
    adj = host.parent.adj
    red = coloring.red & host.mask
    out = 0
    for comp in component_masks(adj, red):
        if adj[w] & comp:
            out |= comp
    return out


def find_f(host: GraphLike, w: int, attached: int, v_tuple, coloring: Coloring,
           f: Formula | Sigma3Form, k: int, counters: Counters | None = None) -> list[Candidate]:
    """
    Candidate unions F = G_x for a leaf x mapped to the blue vertex w: F
    keeps every vertex of `attached` (W) and of v, and (F, v) |= phi[x].
    Boundaries are N(F) plus w.
    """
    form = _form(f)
    v_tuple = tuple(v_tuple)
    _check_tuple(host, v_tuple, form)
    if w not in host or not coloring.is_blue(w):
        raise PreconditionError(f"FindF needs a blue vertex w, got {w}")
    counters = counters if counters is not None else Counters()
    parent, adj = host.parent, host.parent.adj
    keep = attached | to_mask(v_tuple)
    out = {}

    def search(region: int, h: int, level: int):
        counters.visit(level)
        fail = _failing(parent, region, v_tuple, form)
        if fail is None:
            if h >= 0:
                boundary = neighbors_of(adj, region, host.mask) | (1 << w)
                out.setdefault((region, boundary), Candidate(region, boundary, k - h))
            return
        if h <= 0:
            return
        children = 0
        for u in _distinct(fail):
            if coloring.is_blue(u):
                removed, cost = 1 << u, 1
            else:
                z = closure(adj, coloring.red & region, 1 << u)
                if z & keep:
                    continue
                s = neighbors_of(adj, z, region)
                cost = popcount(s)
                if cost > h:
                    continue
                removed = z | s
            children += 1
            assert cost >= 1
            search(components_touching(parent.view(region & ~removed), keep), h - cost, level + 1)
        counters.branched(children)

    search(components_touching(parent.view(host.mask & ~(1 << w)), keep), k - 1, 0)
    counters.candidates += len(out)
    return list(out.values())


# =============================================================================
# FindX
# =============================================================================

def find_x(g: GraphLike, v_tuple, coloring: Coloring, f: Formula | Sigma3Form, k: int, p: int,
           base: int = 0, region: int | None = None, depth_budget: int | None = None,
           counters: Counters | None = None, depths: DepthSearch | None = None) -> int | None:
    """
    A set Z inside `region` such that G - base - Z |= phi[x] under v and
    depth(Z) <= depth_budget (default k-1), or None. Vertices outside the
    region must be red.
    """
    form = _form(f)
    v_tuple = tuple(v_tuple)
    _check_tuple(g, v_tuple, form)
    region = g.mask if region is None else region
    budget = k - 1 if depth_budget is None else depth_budget
    if (g.mask & ~region) & ~coloring.red:
        raise PreconditionError("vertices outside the region must be red")
    counters = counters if counters is not None else Counters()
    depths = depths or DepthSearch(g.parent.adj)
    parent, adj = g.parent, g.parent.adj
    deletable = coloring.blue | coloring.yellow
    seen = set()

    def search(z: int, h: int, level: int) -> int | None:
        if z in seen:
            return None
        seen.add(z)
        counters.visit(level)
        rest = g.mask & ~(base | z)
        fail = _failing(parent, rest, v_tuple, form)
        depth_ok = depths.represent(region, z, budget) is not None
        if fail is None and depth_ok and h >= 0:
            return z
        if fail is not None and h <= 0:
            return None
        if fail is not None:
            targets = [u for u in _distinct(fail) if deletable >> u & 1]
            if not targets:
                return None
            counters.branched(len(targets))
            for u in targets:
                found = search(z | (1 << u), h - 1, level + 1)
                if found is not None:
                    return found
        if not depth_ok and h >= 1:
            children = 0
            for comp in component_masks(adj, (coloring.red | coloring.yellow) & rest):
                around = neighbors_of(adj, comp, rest)
                if popcount(around) > k or popcount(comp) > p:
                    continue
                s = (comp | around) & deletable
                if not s or popcount(s) > h:
                    continue
                children += 1
                found = search(z | s, h - popcount(s), level + 1)
                if found is not None:
                    return found
            counters.branched(children, by_component=True)
        return None

    return search(0, p + k, 0)


# =============================================================================
# Solvers
# =============================================================================

class UnbreakableSearch:
    """State shared by all family members of one solve_unbreakable call."""

    def __init__(self, g: GraphLike, f: Formula, k: int, p: int,
                 family_method: str = "auto", seed: int | None = None):
        self.g = g
        self.parent = g.parent
        self.adj = g.parent.adj
        self.f = f
        self.form = sigma3_form(f)
        self.k = k
        self.p = p
        self.family_method = family_method
        self.seed = config.DEFAULT_SEED if seed is None else seed
        self.evaluator = evaluator_for(f)
        self.truth = {}
        self.depths = DepthSearch(self.adj)
        self.counters = Counters()

    def holds(self, mask: int) -> bool:
        if mask not in self.truth:
            self.truth[mask] = satisfies(self.parent.view(mask), self.evaluator)
        return self.truth[mask]

    def family(self, elements: int, a: int, b: int) -> list[int]:
        verts = to_sorted(elements)
        n = len(verts)
        fam = build_family(n, min(a, n), min(b, n), method=self.family_method, seed=self.seed)
        self.counters.family_size += len(fam)
        return fam.lift(verts)

    def tuples(self, mask: int):
        return product(to_sorted(mask), repeat=self.form.r)

    def fill(self, comp: int, region: int, boundary: int):
        """Sets boundary + Y for every Y outside N[region], if at most p vertices are left."""
        rest = comp & ~(region | boundary)
        if popcount(rest) > self.p:
            return
        for y in subsets_by_size(rest):
            yield boundary | y

    # -- ed_conn ---------------------------------------------------------------

    def conn_member(self, comp: int, red: int) -> WitnessPart | None:
        base = Coloring(comp, red)
        view = self.parent.view(comp)
        for v in self.tuples(comp):
            for cand in find_c(view, v, base.with_red(v), self.form, self.k, self.counters):
                if popcount(cand.region) < self.p + 1:
                    continue
                for x in self.fill(comp, cand.region, cand.boundary):
                    forest = self.depths.represent(comp, x, self.k - 1)
                    if forest is None:
                        continue
                    others = comp & ~(cand.region | x)
                    if all(self.holds(c) for c in component_masks(self.adj, others)):
                        return WitnessPart(comp, EliminationRepresentation.from_forest(forest))
        return None

    # -- ed_prop ---------------------------------------------------------------

    def prop_search(self, comp: int) -> PropSearch:
        search = PropSearch(self.parent.view(comp), self.evaluator)
        search.truth = self.truth
        return search

    def prop_member(self, comp: int, red: int) -> WitnessPart | None:
        base = Coloring(comp, red)
        view = self.parent.view(comp)
        search = self.prop_search(comp)
        for v in self.tuples(comp):
            for cand in find_c(view, v, base.with_red(v), self.form, self.k, self.counters):
                if popcount(cand.region) < self.p + 1:
                    continue
                for x in self.fill(comp, cand.region, cand.boundary):
                    rep = search.find(x, self.k) if x else None
                    if rep is not None:
                        return WitnessPart(comp, rep)
        return None

    def prop_attached_member(self, comp: int, red: int) -> WitnessPart | None:
        base = Coloring(comp, red)
        view = self.parent.view(comp)
        search = self.prop_search(comp)
        for w in bits(base.blue):
            for v in self.tuples(comp & ~(1 << w)):
                coloring = base.with_red(v)
                attached = red_attachment(view, w, coloring)
                for cand in find_f(view, w, attached, v, coloring, self.form, self.k, self.counters):
                    for x in self.fill(comp, cand.region, cand.boundary):
                        rep = search.find(x, self.k)
                        if rep is not None:
                            return WitnessPart(comp, rep)
        return None

    # -- ed_depth --------------------------------------------------------------

    def small_part_budget(self, small: int, xs: int) -> int | None:
        """Depth budget left for the big component once X meets the small ones in xs."""
        at_limit = 0
        for comp in component_masks(self.adj, small):
            if self.depths.represent(comp, xs & comp, self.k - 1) is None:
                return None
            if self.depths.represent(comp, xs & comp, self.k - 2) is None:
                at_limit += 1
        if at_limit > 1:
            return None
        return self.k - 1 if at_limit == 0 else self.k - 2

    def depth_member(self, big: int, red: int) -> int | None:
        g = self.g
        small = g.mask & ~big
        outside = small | red
        for xs in subsets_by_size(small):
            budget = self.small_part_budget(small, xs)
            if budget is None:
                continue
            for yellow in self.family(big & ~red, self.p, self.k):
                coloring = Coloring(g.mask, outside, yellow)
                for v in self.tuples(g.mask & ~xs):
                    z = find_x(g, v, coloring.with_red(v), self.form, self.k, self.p,
                               base=xs, region=big, depth_budget=budget,
                               counters=self.counters, depths=self.depths)
                    if z is not None:
                        return xs | z
        return None

    def run(self, task: tuple):
        kind, region, red = task
        self.counters.tasks += 1
        if kind == "conn":
            return self.conn_member(region, red)
        if kind == "prop":
            return self.prop_member(region, red)
        if kind == "prop-attached":
            return self.prop_attached_member(region, red)
        return self.depth_member(region, red)


_WORKER: UnbreakableSearch | None = None


def _init_worker(g, f, k, p, family_method, seed):
    global _WORKER
    _WORKER = UnbreakableSearch(g, f, k, p, family_method, seed)


def _run_in_worker(task):
    _WORKER.counters = Counters()
    result = _WORKER.run(task)
    return result, _WORKER.counters


def _first_hit(search: UnbreakableSearch, tasks: list, jobs: int, progress: Progress | None,
               counters: Counters, stage: str):
    if jobs <= 1 or len(tasks) <= 1:
        for task in tasks:
            before, search.counters = search.counters, Counters()
            result = search.run(task)
            counters.merge(search.counters)
            search.counters = before
            if progress:
                progress(stage, counters)
            if result is not None:
                return result
        return None
    init = (search.g, search.f, search.k, search.p, search.family_method, search.seed)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=init) as pool:
        for result, task_counters in pool.map(_run_in_worker, tasks):
            counters.merge(task_counters)
            if progress:
                progress(stage, counters)
            if result is not None:
                pool.shutdown(wait=False, cancel_futures=True)
                return result
    return None


def solve_unbreakable(g: GraphLike, f: Formula, k: int, p: int | None = None,
                      variant: Variant = Variant.CONN, verify_unbreakable: bool = False,
                      jobs: int = 1, progress: Progress | None = None,
                      counters: Counters | None = None, cutoff: int | None = None,
                      family_method: str = "auto", seed: int | None = None) -> tuple[bool, Witness | None]:
    """
    Decide ed_variant(G) <= k on a (p,k)-unbreakable graph for a S3 sentence.

    `cutoff` overrides the exact-solver threshold (3p+2k)(p+1); lowering it
    keeps every "yes" sound but completeness then rests on the size bound
    for solutions, which only holds above the threshold.
    """
    variant = Variant(variant)
    if not f.is_sentence:
        raise PreconditionError("solve_unbreakable needs a sentence")
    sigma3_form(f)
    if k < 0:
        raise PreconditionError("k must be non-negative")
    p = default_p(k) if p is None else p
    if p < 1:
        raise PreconditionError("p must be at least 1")
    if verify_unbreakable and k >= 1 and not is_unbreakable(g, p, k)[0]:
        raise PreconditionError(f"graph is not ({p},{k})-unbreakable")
    counters = counters if counters is not None else Counters()
    search = UnbreakableSearch(g, f, k, p, family_method, seed)
    limit = exact_cutoff(p, k) if cutoff is None else cutoff

    if variant == Variant.DEPTH:
        return _solve_depth(search, limit, jobs, progress, counters)

    if variant == Variant.PROP and search.holds(g.mask):
        return True, Witness(variant, k, ())
    if variant == Variant.PROP and k == 0:
        return False, None
    parts = []
    for comp in component_masks(search.adj, g.mask):
        if search.holds(comp):
            continue
        if k == 0:
            return False, None
        if popcount(comp) <= limit:
            part = _exact_part(search, comp, variant)
        else:
            family = search.family(comp, p, k)
            counters.family_size += search.counters.family_size
            search.counters.family_size = 0
            kinds = ["conn"] if variant == Variant.CONN else ["prop", "prop-attached"]
            tasks = [(kind, comp, red) for kind in kinds for red in family]
            part = _first_hit(search, tasks, jobs, progress, counters, f"{variant.value} component")
        if part is None:
            return False, None
        parts.append(part)
    return True, Witness(variant, k, tuple(parts))


def _exact_part(search: UnbreakableSearch, comp: int, variant: Variant) -> WitnessPart | None:
    solver = ExactSolver(search.parent.view(comp), search.evaluator)
    solver.truth = search.truth
    if variant == Variant.CONN:
        found = solver.conn_set(comp, search.k)
        return None if found is None else WitnessPart(comp, EliminationRepresentation.from_forest(found[1]))
    found = solver.prop_set(comp, search.k)
    return None if found is None else WitnessPart(comp, found[1])


def _solve_depth(search: UnbreakableSearch, limit: int, jobs: int, progress: Progress | None,
                 counters: Counters) -> tuple[bool, Witness | None]:
    g, k = search.g, search.k
    if search.holds(g.mask):
        return True, Witness(Variant.DEPTH, k, ())
    if k == 0:
        return False, None
    if len(g) <= limit:
        solver = ExactSolver(g, search.evaluator)
        solver.truth = search.truth
        found = solver.depth_set(k)
        x = None if found is None else found[0]
    else:
        big = max(component_masks(search.adj, g.mask), key=popcount)
        family = search.family(big, search.p, search.p + k)
        counters.family_size += search.counters.family_size
        search.counters.family_size = 0
        tasks = [("depth", big, red) for red in family]
        x = _first_hit(search, tasks, jobs, progress, counters, "depth")
    if x is None:
        return False, None
    forest = search.depths.represent(g.mask, x, k - 1)
    if forest is None:
        raise PreconditionError("internal error: solution lost its depth bound")
    return True, Witness(Variant.DEPTH, k, (WitnessPart(g.mask, EliminationRepresentation.from_forest(forest)),))
