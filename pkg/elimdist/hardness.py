"""
hardness.py - elimdist: The Set-Cover Reduction

Core Idea: "Every Element Wants a Degree-One Vertex Nearby"
===========================================================
The sentence used here says: every vertex u has some vertex at distance at
most two whose degree is at most one.

    A x E y1 E y2 A z1 .. A z6
        deg(x) <= 1
      | x ~ y1 and deg(y1) <= 1
      | x ~ y1 ~ y2 and deg(y2) <= 1

The reduction builds a graph where that property fails only at the element
vertices, and deleting the tail w_j of a set path repairs exactly the
elements of S_j:

    u_i^(1..k+2)   k+2 copies of every element, one big clique
    s_j - v_j - w_j  a path per set; s_j sees every copy of u_i in S_j

    w_j deleted  =>  v_j has degree one and sits at distance two from the
                     copies of every element of S_j

With k+2 copies an element can never be fixed by deleting its copies, so

    U has a cover of size <= k   iff   ed(G) <= k   (all three variants)

Vertex layout (stable across runs):

    u_i^(p)  ->  i*(k+2) + (p-1)
    s_j      ->  n*(k+2) + 3j,   v_j -> +1,   w_j -> +2

Instance file:

    n m k
    0 1        # S_0
    -          # S_1 = {} ("-" marks an empty set)
"""

import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from . import config
from .distance import ed_conn_at_most, ed_depth_at_most, ed_prop_at_most
from .errors import GraphFormatError, PreconditionError
from .formula import Adjacent, And, Equal, Formula, Implies, Or, QuantKind, Quantifier
from .graph import Graph
from .modelcheck import specialized_evaluator


@dataclass(frozen=True)
class SetCoverInstance:
    n: int
    sets: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(frozenset(s) for s in self.sets))
        if self.n < 2:
            raise PreconditionError(f"set cover needs n >= 2, got {self.n}")
        if not 0 <= self.k <= self.m:
            raise PreconditionError(f"need 0 <= k <= m, got k={self.k}, m={self.m}")
        for j, s in enumerate(self.sets):
            if any(not 0 <= e < self.n for e in s):
                raise PreconditionError(f"S_{j} has an element outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.sets)


def has_cover(inst: SetCoverInstance) -> bool:
    universe = set(range(inst.n))
    for size in range(inst.k + 1):
        for chosen in combinations(inst.sets, size):
            if set().union(*chosen) == universe:
                return True
    return False


# =============================================================================
# Formula and graph
# =============================================================================

def _low_degree(v: str, a: str, b: str):
    return Implies(And((Adjacent(v, a), Adjacent(v, b))), Equal(a, b))


def hard_formula() -> Formula:
    prefix = [Quantifier(QuantKind.FORALL, "x"), Quantifier(QuantKind.EXISTS, "y1"),
              Quantifier(QuantKind.EXISTS, "y2")]
    prefix += [Quantifier(QuantKind.FORALL, f"z{i}") for i in range(1, 7)]
    matrix = Or((
        _low_degree("x", "z1", "z2"),
        And((Adjacent("x", "y1"), _low_degree("y1", "z3", "z4"))),
        And((Adjacent("x", "y1"), Adjacent("y1", "y2"), _low_degree("y2", "z5", "z6"))),
    ))
    return Formula(tuple(prefix), matrix)


def copy_id(inst: SetCoverInstance, i: int, p: int) -> int:
    """Vertex of u_i^(p), p in 1..k+2."""
    return i * (inst.k + 2) + (p - 1)


def triple_ids(inst: SetCoverInstance, j: int) -> tuple[int, int, int]:
    base = inst.n * (inst.k + 2) + 3 * j
    return base, base + 1, base + 2


def setcover_to_graph(inst: SetCoverInstance) -> Graph:
    copies = inst.k + 2
    clique = inst.n * copies
    edges = list(combinations(range(clique), 2))
    for j, s in enumerate(inst.sets):
        sj, vj, wj = triple_ids(inst, j)
        edges += [(sj, vj), (vj, wj)]
        edges += [(copy_id(inst, i, p), sj) for i in sorted(s) for p in range(1, copies + 1)]
    return Graph.from_edges(clique + 3 * inst.m, edges)


def vertex_names(inst: SetCoverInstance) -> list[str]:
    names = [f"u{i}^{p}" for i in range(inst.n) for p in range(1, inst.k + 3)]
    for j in range(inst.m):
        names += [f"s{j}", f"v{j}", f"w{j}"]
    return names


def reduction_equivalence_check(inst: SetCoverInstance, cap: int | None = None) -> bool:
    """Cover of size <= k exists iff ed <= k, checked for all three variants."""
    g = setcover_to_graph(inst)
    f = hard_formula()
    ev = specialized_evaluator("hardness_dist2_degree1")
    limit = config.resolve_cap(cap, "REDUCTION_CAP")
    expected = has_cover(inst)
    return all(
        check(g, f, inst.k, evaluator=ev, cap=limit) == expected
        for check in (ed_conn_at_most, ed_prop_at_most, ed_depth_at_most)
    )


# =============================================================================
# Instances on disk
# =============================================================================

def format_setcover(inst: SetCoverInstance) -> str:
    lines = [f"{inst.n} {inst.m} {inst.k}"]
    lines += [" ".join(str(e) for e in sorted(s)) or "-" for s in inst.sets]
    return "\n".join(lines) + "\n"


def parse_setcover(text: str) -> SetCoverInstance:
    lines = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    lines = [line for line in lines if line]
    if not lines:
        raise GraphFormatError("empty set-cover file: expected a header 'n m k'")
    try:
        n, m, k = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise GraphFormatError("set-cover header must be 'n m k'")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header announces {m} sets, found {len(lines) - 1}")
    sets = []
    for j, line in enumerate(lines[1:]):
        if line == "-":
            sets.append(frozenset())
            continue
        try:
            sets.append(frozenset(int(tok) for tok in line.split()))
        except ValueError:
            raise GraphFormatError(f"set {j}: expected element indices")
    try:
        return SetCoverInstance(n, tuple(sets), k)
    except PreconditionError as e:
        raise GraphFormatError(str(e))


def load_setcover(path: str | Path) -> SetCoverInstance:
    return parse_setcover(Path(path).read_text(encoding="utf-8"))


def write_setcover(inst: SetCoverInstance, path: str | Path) -> None:
    Path(path).write_text(format_setcover(inst), encoding="utf-8")


def random_setcover(n: int, m: int, k: int, rng: random.Random, density: float = 0.5) -> SetCoverInstance:
    sets = [frozenset(e for e in range(n) if rng.random() < density) for _ in range(m)]
    return SetCoverInstance(n, tuple(sets), k)
