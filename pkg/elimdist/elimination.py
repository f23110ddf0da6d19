r"""
elimination.py - elimdist: Elimination Sets and Their Representations

Core Idea: "Delete a Root, Recurse into the Pieces"
===================================================
An elimination set X comes with a rooted tree T and a bijection alpha from
the tree nodes onto X. The tree records the order in which the vertices of
X are deleted; the defining property is that whenever two nodes x, y are
incomparable, the images of the ancestors of their lowest common ancestor
separate alpha(x) from alpha(y):

        b            G = a - b - c        T: root -> b, children -> a, c
       / \                                {b} separates a from c: valid
      a   c

The depth of X is the least height of such a tree (-1 for X empty).

Deciding depth(X) <= d
----------------------
    connected G:    try every x in X as the root (ascending id), and
                    solve each component of G - x that meets X with d - 1.
    disconnected G: one component keeps the full budget d, all the others
                    get d - 1, and their roots hang below the chosen one.

The connected rule only produces *nice* trees: each child subtree lives in
one component of G minus the ancestors. make_nice() turns any valid tree of
a connected graph into a nice one without deepening any node.

Anchors and the ed_prop conditions
----------------------------------
The anchor of a component C of G - X is the deepest node whose image
touches C. P_x collects the components anchored at x and G_x is their
union. A representation of depth <= k-1 certifies ed_prop <= k when

    | Node                  | Requirement                           |
    |-----------------------|---------------------------------------|
    | non-leaf              | every C in P_x models phi             |
    | leaf at depth <= k-2  | G_x models phi, or every C in P_x does |
    | leaf at depth k-1     | G_x models phi                        |

An empty G_x counts as satisfying phi.
"""

from dataclasses import dataclass
from functools import cached_property

from .errors import PreconditionError
from .formula import Formula
from .graph import GraphLike, bits, component_masks, is_connected, neighbors_of, popcount
from .modelcheck import Evaluator, evaluator_for, satisfies


# =============================================================================
# EliminationRepresentation
# =============================================================================

@dataclass(frozen=True)
class EliminationRepresentation:
    """A rooted tree given by a parent array (-1 at the root) plus node images."""
    parent: tuple
    alpha: tuple

    def __post_init__(self):
        m = len(self.parent)
        if len(self.alpha) != m:
            raise PreconditionError("tree and alpha must have the same length")
        if len(set(self.alpha)) != m:
            raise PreconditionError("alpha is not a bijection onto its image")
        if m and self.parent.count(-1) != 1:
            raise PreconditionError("the tree must have exactly one root")
        for node in range(m):
            seen, cur = set(), node
            while cur != -1:
                if cur in seen or not -1 <= self.parent[cur] < m:
                    raise PreconditionError("parent array does not describe a rooted tree")
                seen.add(cur)
                cur = self.parent[cur]

    @classmethod
    def empty(cls) -> "EliminationRepresentation":
        return cls((), ())

    @classmethod
    def from_forest(cls, forest: dict) -> "EliminationRepresentation":
        """Build from a vertex -> parent-vertex map (-1 for the root); nodes follow vertex order."""
        order = sorted(forest)
        index = {v: i for i, v in enumerate(order)}
        return cls(tuple(index[forest[v]] if forest[v] != -1 else -1 for v in order), tuple(order))

    def __len__(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int | None:
        return self.parent.index(-1) if self.parent else None

    @cached_property
    def vertex_set(self) -> int:
        mask = 0
        for v in self.alpha:
            mask |= 1 << v
        return mask

    @cached_property
    def children(self) -> tuple:
        kids = [[] for _ in self.parent]
        for node, p in enumerate(self.parent):
            if p != -1:
                kids[p].append(node)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def depths(self) -> tuple:
        out = [0] * len(self.parent)
        for node in range(len(self.parent)):
            d, cur = 0, self.parent[node]
            while cur != -1:
                d, cur = d + 1, self.parent[cur]
            out[node] = d
        return tuple(out)

    @property
    def depth(self) -> int:
        return max(self.depths, default=-1)

    def is_leaf(self, node: int) -> bool:
        return not self.children[node]

    def ancestors(self, node: int) -> list[int]:
        """A_T(node), the node itself included."""
        out = []
        while node != -1:
            out.append(node)
            node = self.parent[node]
        return out

    def ancestor_mask(self, node: int) -> int:
        mask = 0
        for a in self.ancestors(node):
            mask |= 1 << self.alpha[a]
        return mask

    def subtree_mask(self, node: int) -> int:
        mask, stack = 0, [node]
        while stack:
            cur = stack.pop()
            mask |= 1 << self.alpha[cur]
            stack.extend(self.children[cur])
        return mask

    def node_of(self, vertex: int) -> int:
        return self.alpha.index(vertex)

    def to_json(self) -> dict:
        return {"tree": list(self.parent), "alpha": list(self.alpha)}

    @classmethod
    def from_json(cls, obj: dict) -> "EliminationRepresentation":
        return cls(tuple(obj["tree"]), tuple(obj["alpha"]))


# =============================================================================
# Validity and niceness
# =============================================================================

def _check_alpha(g: GraphLike, rep: EliminationRepresentation):
    if rep.vertex_set & ~g.mask:
        raise PreconditionError("alpha maps outside the graph")


def validate_representation(g: GraphLike, rep: EliminationRepresentation) -> bool:
    _check_alpha(g, rep)
    adj = g.parent.adj
    for node, kids in enumerate(rep.children):
        if len(kids) < 2:
            continue
        comps = component_masks(adj, g.mask & ~rep.ancestor_mask(node))
        claimed = 0
        for kid in kids:
            image = rep.subtree_mask(kid)
            touched = 0
            for comp in comps:
                if comp & image:
                    touched |= comp
            if touched & claimed:
                return False
            claimed |= touched
    return True


def is_nice(g: GraphLike, rep: EliminationRepresentation) -> bool:
    _check_alpha(g, rep)
    adj = g.parent.adj
    for node, kids in enumerate(rep.children):
        if not kids:
            continue
        comps = component_masks(adj, g.mask & ~rep.ancestor_mask(node))
        for kid in kids:
            image = rep.subtree_mask(kid)
            if sum(1 for comp in comps if comp & image) != 1:
                return False
    return True


def make_nice(g: GraphLike, rep: EliminationRepresentation) -> EliminationRepresentation:
    """
    Rebuild a valid representation of a connected graph as a nice one.

    Same nodes and images; each node's new parent is chosen component by
    component, so no node gets deeper and every leaf stays a leaf.
    """
    if not is_connected(g):
        raise PreconditionError("make_nice needs a connected graph")
    if not rep:
        return rep
    if not validate_representation(g, rep):
        raise PreconditionError("representation is not valid")
    adj = g.parent.adj
    proper = [set(rep.ancestors(node)[1:]) for node in range(len(rep))]
    parent = [-1] * len(rep)

    def build(mask: int, nodes: list[int], top: int):
        rest = mask & ~(1 << rep.alpha[top])
        others = [node for node in nodes if node != top]
        for comp in component_masks(adj, rest):
            group = [node for node in others if comp >> rep.alpha[node] & 1]
            if not group:
                continue
            members = set(group)
            heads = [node for node in group if not proper[node] & members]
            if len(heads) != 1:
                raise PreconditionError("representation is not valid")
            parent[heads[0]] = top
            build(comp, group, heads[0])

    build(g.mask, list(range(len(rep))), rep.root)
    return EliminationRepresentation(tuple(parent), rep.alpha)


# =============================================================================
# Depth
# =============================================================================

class DepthSearch:
    """Root-guessing search for representations; memo tables live per instance."""

    def __init__(self, adj):
        self.adj = adj
        self.memo = {}

    def represent(self, mask: int, x: int, d: int) -> dict | None:
        if not x:
            return {}
        if d < 0:
            return None
        parts = [(comp, comp & x) for comp in component_masks(self.adj, mask) if comp & x]
        if len(parts) == 1:
            return self.connected(parts[0][0], parts[0][1], d)
        for i, (comp, xi) in enumerate(parts):
            main = self.connected(comp, xi, d)
            if main is None:
                continue
            forest = dict(main)
            root = next(v for v, p in main.items() if p == -1)
            for j, (other, xj) in enumerate(parts):
                if j == i:
                    continue
                sub = self.connected(other, xj, d - 1)
                if sub is None:
                    break
                forest.update(sub)
                forest[next(v for v, p in sub.items() if p == -1)] = root
            else:
                return forest
        return None

    def connected(self, mask: int, x: int, d: int) -> dict | None:
        key = (mask, x, d)
        if key in self.memo:
            return self.memo[key]
        result = None
        if d >= 0 and popcount(x) == 1:
            result = {x.bit_length() - 1: -1}
        elif d >= 1:
            for root in bits(x):
                result = self._rooted(mask & ~(1 << root), x & ~(1 << root), root, d)
                if result is not None:
                    break
        self.memo[key] = result
        return result

    def _rooted(self, rest: int, x: int, root: int, d: int) -> dict | None:
        forest = {root: -1}
        for comp in component_masks(self.adj, rest):
            if not comp & x:
                continue
            sub = self.connected(comp, comp & x, d - 1)
            if sub is None:
                return None
            forest.update(sub)
            forest[next(v for v, p in sub.items() if p == -1)] = root
        return forest


def _check_subset(g: GraphLike, x: int):
    if x & ~g.mask:
        raise PreconditionError("X is not a subset of V(G)")


def depth_at_most(g: GraphLike, x: int, d: int) -> EliminationRepresentation | None:
    _check_subset(g, x)
    if d < -1:
        raise PreconditionError("depth bound must be at least -1")
    forest = DepthSearch(g.parent.adj).represent(g.mask, x, d)
    return None if forest is None else EliminationRepresentation.from_forest(forest)


def depth(g: GraphLike, x: int) -> int:
    _check_subset(g, x)
    if not x:
        return -1
    search = DepthSearch(g.parent.adj)
    d = 0
    while search.represent(g.mask, x, d) is None:
        d += 1
    return d


# =============================================================================
# Anchors and the ed_prop conditions
# =============================================================================

def anchors(g: GraphLike, rep: EliminationRepresentation) -> dict[int, int]:
    """Map each component mask of G - X to its anchor node."""
    if not validate_representation(g, rep):
        raise PreconditionError("invalid representation")
    x = rep.vertex_set
    adj = g.parent.adj
    comps = component_masks(adj, g.mask & ~x)
    if comps and not rep:
        raise PreconditionError("the empty representation has no anchors")
    node_of = {v: node for node, v in enumerate(rep.alpha)}
    out = {}
    for comp in comps:
        touching = neighbors_of(adj, comp, x)
        if not touching:
            out[comp] = rep.root
            continue
        anchor = max((node_of[v] for v in bits(touching)), key=lambda node: rep.depths[node])
        if touching & ~rep.ancestor_mask(anchor):
            raise PreconditionError("component neighborhood is not on the anchor's root path")
        out[comp] = anchor
    return out


def check_prop_conditions(g: GraphLike, rep: EliminationRepresentation, k: int,
                          f: Formula, evaluator: Evaluator | None = None) -> bool:
    if not rep:
        raise PreconditionError("conditions are defined for non-empty elimination sets")
    if rep.depth > k - 1 or not validate_representation(g, rep):
        return False
    ev = evaluator or evaluator_for(f)
    parent = g.parent

    def holds(mask: int) -> bool:
        return satisfies(parent.view(mask), ev)

    grouped = {}
    for comp, node in anchors(g, rep).items():
        grouped.setdefault(node, []).append(comp)
    for node in range(len(rep)):
        comps = grouped.get(node, [])
        if not rep.is_leaf(node):
            if not all(holds(c) for c in comps):
                return False
            continue
        union = 0
        for c in comps:
            union |= c
        if rep.depths[node] == k - 1:
            if not holds(union):
                return False
        elif not (holds(union) or all(holds(c) for c in comps)):
            return False
    return True


class PropSearch:
    def __init__(self, g: GraphLike, evaluator: Evaluator):
        self.parent = g.parent
        self.mask = g.mask
        self.adj = g.parent.adj
        self.evaluator = evaluator
        self.memo = {}
        self.truth = {}

    def holds(self, mask: int) -> bool:
        if mask not in self.truth:
            self.truth[mask] = satisfies(self.parent.view(mask), self.evaluator)
        return self.truth[mask]

    def find(self, x: int, k: int) -> EliminationRepresentation | None:
        """Try every vertex of X as the root, ascending; the graph must be connected."""
        for root in bits(x):
            forest = self.rooted(self.mask, x, root, k)
            if forest is not None:
                return EliminationRepresentation.from_forest(forest)
        return None

    def rooted(self, mask: int, x: int, root: int, k: int) -> dict | None:
        key = (mask, x, root, k)
        if key not in self.memo:
            self.memo[key] = self._rooted(mask, x, root, k)
        return self.memo[key]

    def _rooted(self, mask: int, x: int, root: int, k: int) -> dict | None:
        rest = mask & ~(1 << root)
        comps = component_masks(self.adj, rest)
        if x == 1 << root:
            if self.holds(rest) or (k >= 2 and all(self.holds(c) for c in comps)):
                return {root: -1}
            return None
        if k == 1:
            return None
        forest = {root: -1}
        for comp in comps:
            xc = x & comp
            if not xc:
                if not self.holds(comp):
                    return None
                continue
            for child in bits(xc):
                sub = self.rooted(comp, xc, child, k - 1)
                if sub is not None:
                    forest.update(sub)
                    forest[child] = root
                    break
            else:
                return None
        return forest


def prop_representation(g: GraphLike, x: int, k: int, f: Formula,
                        evaluator: Evaluator | None = None) -> EliminationRepresentation | None:
    """A nice representation of X with depth <= k-1 meeting the ed_prop conditions, or None."""
    if not is_connected(g):
        raise PreconditionError("prop_representation needs a connected graph")
    _check_subset(g, x)
    if not x or k < 1:
        raise PreconditionError("prop_representation needs X non-empty and k >= 1")
    return PropSearch(g, evaluator or evaluator_for(f)).find(x, k)
