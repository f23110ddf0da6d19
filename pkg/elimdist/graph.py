"""
graph.py - elimdist: Bitset Graphs and Views

Core Idea: "A Subgraph Is a Mask"
=================================
Every algorithm in this package deletes vertices and recurses into what is
left: G - v, the component of C - u_j that still holds all of v1..vr, the
graph G - X. Copying graphs for each of those steps would lose the vertex
identities the recursion relies on (the tuple v1..vr is expressed in the
ORIGINAL ids). So a graph is stored once, as one int bitmask per vertex,
and every induced subgraph is a view:

    Graph            adj[v] = bitmask of neighbors, ids 0..n-1
    InducedSubgraph  (parent, mask)  - same ids, edges restricted to mask

    G - v            g.minus(1 << v)
    N(S)             OR of adj[v] over S, minus S
    component        breadth-first closure over masks

File formats:
    .el   first non-comment line "n m", then m lines "u v" (0 <= u < v < n)
    .col  DIMACS "p edge n m" / "e u v", 1-indexed, read only
"""

import random
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import networkx as nx

from .errors import GraphFormatError, PreconditionError


# =============================================================================
# Bitset helpers
# =============================================================================

def bits(mask: int):
    """Yield the set bits of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return mask.bit_count()


def to_mask(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def to_set(mask: int) -> frozenset:
    return frozenset(bits(mask))


def to_sorted(mask: int) -> list[int]:
    return list(bits(mask))


def closure(adj, mask: int, seed: int) -> int:
    comp = frontier = seed
    while frontier:
        reach = 0
        for v in bits(frontier):
            reach |= adj[v]
        frontier = reach & mask & ~comp
        comp |= frontier
    return comp


def component_masks(adj, mask: int) -> list[int]:
    """Components of the subgraph induced by `mask`, ordered by lowest vertex."""
    out = []
    rest = mask
    while rest:
        comp = closure(adj, rest, rest & -rest)
        out.append(comp)
        rest &= ~comp
    return out


def neighbors_of(adj, mask: int, within: int) -> int:
    """Open neighborhood of `mask` inside `within`."""
    reach = 0
    for v in bits(mask):
        reach |= adj[v]
    return reach & within & ~mask


# =============================================================================
# Graph and InducedSubgraph
# =============================================================================

class _GraphOps:
    """Operations shared by graphs and views: both expose `parent` and `mask`."""

    def neighbors(self, v: int) -> int:
        return self.parent.adj[v] & self.mask

    def vertices(self) -> list[int]:
        return list(bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: int) -> bool:
        return v >= 0 and bool(self.mask >> v & 1)

    def has_edge(self, u: int, v: int) -> bool:
        return u in self and v in self and bool(self.parent.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.neighbors(v).bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in bits(self.mask) for v in bits(self.neighbors(u)) if u < v]

    def view(self, mask: int) -> "InducedSubgraph":
        if mask & ~self.mask:
            raise PreconditionError("view mask is not a subset of the vertex set")
        return InducedSubgraph(self.parent, mask)

    def minus(self, mask: int) -> "InducedSubgraph":
        return InducedSubgraph(self.parent, self.mask & ~mask)

    def to_networkx(self) -> nx.Graph:
        h = nx.Graph()
        h.add_nodes_from(self.vertices())
        h.add_edges_from(self.edges())
        return h


@dataclass(frozen=True)
class Graph(_GraphOps):
    n: int
    adj: tuple
    labels: tuple | None = None

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise PreconditionError(f"adjacency has {len(self.adj)} rows for n={self.n}")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full:
                raise PreconditionError(f"vertex {v} has a neighbor outside 0..{self.n - 1}")
            if row >> v & 1:
                raise PreconditionError(f"self-loop at vertex {v}")
            for u in bits(row):
                if not self.adj[u] >> v & 1:
                    raise PreconditionError(f"edge {v}-{u} is not symmetric")
        if self.labels is not None and len(self.labels) != self.n:
            raise PreconditionError("labels must have one entry per vertex")

    @property
    def parent(self) -> "Graph":
        return self

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise PreconditionError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge {u}-{v} outside 0..{n - 1}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(labels) if labels is not None else None)

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, (0,) * n)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        full = (1 << n) - 1
        return cls(n, tuple(full & ~(1 << v) for v in range(n)))

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise PreconditionError("a cycle needs at least 3 vertices")
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def star(cls, leaves: int) -> "Graph":
        """K_{1,leaves} with the center at vertex 0."""
        return cls.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])

    @classmethod
    def disjoint_union(cls, *graphs: "Graph") -> "Graph":
        edges, offset = [], 0
        for g in graphs:
            edges.extend((u + offset, v + offset) for u, v in g.edges())
            offset += g.n
        return cls.from_edges(offset, edges)

    @classmethod
    def from_networkx(cls, h: nx.Graph) -> "Graph":
        try:
            nodes = sorted(h.nodes)
        except TypeError:
            nodes = list(h.nodes)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(index[u], index[v]) for u, v in h.edges], labels=nodes)


@dataclass(frozen=True)
class InducedSubgraph(_GraphOps):
    parent: Graph
    mask: int

    def __post_init__(self):
        if self.mask & ~self.parent.mask:
            raise PreconditionError("view contains vertices outside its parent graph")


GraphLike = Graph | InducedSubgraph


# =============================================================================
# Connectivity
# =============================================================================

def components(g: GraphLike) -> list[int]:
    """Vertex masks of the components of g, sorted by minimum vertex id."""
    return component_masks(g.parent.adj, g.mask)


def is_connected(g: GraphLike) -> bool:
    return len(g) > 0 and len(components(g)) == 1


def component_containing(g: GraphLike, required: int) -> int:
    """The component holding every vertex of `required`, or 0 if none does."""
    if not required or required & ~g.mask:
        return 0
    comp = closure(g.parent.adj, g.mask, required & -required)
    return comp if required & ~comp == 0 else 0


def components_touching(g: GraphLike, required: int) -> int:
    """Union of the components of g that meet `required`."""
    out = 0
    adj = g.parent.adj
    rest = required & g.mask
    while rest:
        comp = closure(adj, g.mask, rest & -rest)
        out |= comp
        rest &= ~comp
    return out


def neighborhood(g: GraphLike, s: int, closed: bool = False) -> int:
    if s & ~g.mask:
        raise PreconditionError("neighborhood of a set outside the graph")
    reach = 0
    adj = g.parent.adj
    for v in bits(s):
        reach |= adj[v]
    reach &= g.mask
    return reach | s if closed else reach & ~s


# =============================================================================
# Separations and unbreakability
# =============================================================================

@dataclass(frozen=True)
class Separation:
    a: int
    b: int

    @property
    def order(self) -> int:
        return popcount(self.a & self.b)

    def is_valid(self, g: GraphLike) -> bool:
        if self.a | self.b != g.mask:
            return False
        only_a, only_b = self.a & ~self.b, self.b & ~self.a
        return neighborhood(g, only_a) & only_b == 0


def _split(sizes: list[int], low: int, high: int) -> list[int] | None:
    """Indices of a subset of `sizes` whose sum lies in [low, high], via subset-sum DP."""
    reach = {0: None}
    for i, size in enumerate(sizes):
        for total in list(reach):
            if total + size not in reach:
                reach[total + size] = (total, i)
    for total in sorted(reach):
        if low <= total <= high:
            chosen = []
            while reach[total] is not None:
                total, i = reach[total]
                chosen.append(i)
            return chosen
    return None


def is_unbreakable(g: GraphLike, p: int, q: int) -> tuple[bool, Separation | None]:
    """
    Decide (p,q)-unbreakability.

    Returns (True, None) or (False, witness) where the witness separation has
    order <= q and more than p private vertices on both sides.
    """
    adj = g.parent.adj
    for size in range(q + 1):
        for sep in combinations(g.vertices(), size):
            smask = to_mask(sep)
            comps = component_masks(adj, g.mask & ~smask)
            total = len(g) - size
            chosen = _split([popcount(c) for c in comps], p + 1, total - p - 1)
            if chosen is None:
                continue
            side = 0
            for i in chosen:
                side |= comps[i]
            return False, Separation(side | smask, (g.mask & ~side) | smask)
    return True, None


# =============================================================================
# Torso and tree-depth
# =============================================================================

def torso(g: GraphLike, x: int) -> Graph:
    """G[X] plus a clique on N(C) for each component C of G - X, relabeled 0..|X|-1."""
    if x & ~g.mask:
        raise PreconditionError("torso of a set outside the graph")
    order = to_sorted(x)
    index = {v: i for i, v in enumerate(order)}
    edges = {(index[u], index[v]) for u, v in g.view(x).edges()}
    adj = g.parent.adj
    for comp in component_masks(adj, g.mask & ~x):
        attach = [index[v] for v in bits(neighbors_of(adj, comp, x))]
        edges.update(combinations(attach, 2))
    return Graph.from_edges(len(order), sorted(edges), labels=order)


def tree_depth(g: GraphLike) -> int:
    adj = g.parent.adj
    memo = {0: 0}

    def td(mask: int) -> int:
        if mask in memo:
            return memo[mask]
        comps = component_masks(adj, mask)
        if len(comps) > 1:
            value = max(td(c) for c in comps)
        else:
            value = 1 + min(td(mask & ~(1 << v)) for v in bits(mask))
        memo[mask] = value
        return value

    return td(g.mask)


# =============================================================================
# Files
# =============================================================================

def _content_lines(text: str, comment: str = "#"):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(comment, 1)[0].strip() if comment else raw.strip()
        if line:
            yield number, line


def parse_edge_list(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("empty edge list: expected a header line 'n m'")
    try:
        n, m = (int(tok) for tok in lines[0][1].split())
    except ValueError:
        raise GraphFormatError(f"line {lines[0][0]}: expected 'n m'")
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header announces {m} edges, found {len(lines) - 1}")
    edges = set()
    for number, line in lines[1:]:
        try:
            u, v = (int(tok) for tok in line.split())
        except ValueError:
            raise GraphFormatError(f"line {number}: expected 'u v'")
        if not 0 <= u < v < n:
            raise GraphFormatError(f"line {number}: need 0 <= u < v < {n}, got {u} {v}")
        if (u, v) in edges:
            raise GraphFormatError(f"line {number}: duplicate edge {u} {v}")
        edges.add((u, v))
    return Graph.from_edges(n, sorted(edges))


def format_edge_list(g: GraphLike) -> str:
    if isinstance(g, InducedSubgraph):
        g = _relabel(g)
    edges = g.edges()
    return "\n".join([f"{g.n} {len(edges)}"] + [f"{u} {v}" for u, v in edges]) + "\n"


def _relabel(view: InducedSubgraph) -> Graph:
    order = view.vertices()
    index = {v: i for i, v in enumerate(order)}
    return Graph.from_edges(len(order), [(index[u], index[v]) for u, v in view.edges()], labels=order)


def _dimacs_int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"line {number}: expected an integer, got {token!r}") from None


def parse_dimacs(text: str) -> Graph:
    n, edges = None, set()
    for number, line in _content_lines(text, comment=None):
        tok = line.split()
        if tok[0] == "c":
            continue
        if tok[0] == "p":
            if len(tok) != 4:
                raise GraphFormatError(f"line {number}: expected 'p edge n m'")
            n = _dimacs_int(tok[2], number)
            if n < 0:
                raise GraphFormatError(f"line {number}: negative vertex count {n}")
        elif tok[0] == "e":
            if n is None:
                raise GraphFormatError(f"line {number}: edge before problem line")
            if len(tok) != 3:
                raise GraphFormatError(f"line {number}: expected 'e u v'")
            u, v = _dimacs_int(tok[1], number) - 1, _dimacs_int(tok[2], number) - 1
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise GraphFormatError(f"line {number}: bad edge {tok[1]} {tok[2]}")
            edges.add((min(u, v), max(u, v)))
        else:
            raise GraphFormatError(f"line {number}: unknown record {tok[0]!r}")
    if n is None:
        raise GraphFormatError("missing problem line 'p edge n m'")
    return Graph.from_edges(n, sorted(edges))


def load_graph(path: str | Path) -> Graph:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".col":
        return parse_dimacs(text)
    return parse_edge_list(text)


def write_edge_list(g: GraphLike, path: str | Path) -> None:
    Path(path).write_text(format_edge_list(g), encoding="utf-8")


# =============================================================================
# Generators
# =============================================================================

def random_graph(n: int, density: float, rng: random.Random) -> Graph:
    return Graph.from_edges(n, [(u, v) for u, v in combinations(range(n), 2) if rng.random() < density])


def random_unbreakable(n: int, p: int, q: int, rng: random.Random,
                       density: float = 0.5, attempts: int = 50) -> Graph:
    """
    Sample G(n, density) until it is (p,q)-unbreakable.

    The density creeps up after each batch of failed attempts; K_n is always
    unbreakable, so the loop terminates.
    """
    while True:
        for _ in range(attempts):
            g = random_graph(n, min(density, 1.0), rng)
            if is_unbreakable(g, p, q)[0]:
                return g
        if density >= 1.0:
            return Graph.complete(n)
        density += 0.1
