import json
from itertools import product

import pytest
from hypothesis import given

from conftest import PROPERTY_SETTINGS, atlas_graphs, graphs_with_subset
from elimdist.elimination import (
    EliminationRepresentation, anchors, check_prop_conditions, depth, depth_at_most, is_nice,
    make_nice, prop_representation, validate_representation,
)
from elimdist.errors import PreconditionError
from elimdist.formula import catalog_formula
from elimdist.graph import Graph, bits, to_mask


def all_trees(m: int):
    """Every parent array on m nodes that describes one rooted tree."""
    for parent in product(range(-1, m), repeat=m):
        if any(p == node for node, p in enumerate(parent)):
            continue
        try:
            yield EliminationRepresentation(parent, tuple(range(m)))
        except PreconditionError:
            continue


TREES = {m: list(all_trees(m)) for m in range(1, 5)}


def trees_on(x: int):
    alpha = tuple(bits(x))
    for t in TREES[len(alpha)]:
        yield EliminationRepresentation(t.parent, alpha)


class TestRepresentation:
    def test_single_root(self):
        with pytest.raises(PreconditionError):
            EliminationRepresentation((-1, -1), (0, 1))

    def test_cycle(self):
        with pytest.raises(PreconditionError):
            EliminationRepresentation((-1, 2, 1), (0, 1, 2))

    def test_alpha_must_be_injective(self):
        with pytest.raises(PreconditionError):
            EliminationRepresentation((-1, 0), (3, 3))
        with pytest.raises(PreconditionError):
            EliminationRepresentation((-1, 0), (3,))

    def test_tree_queries(self):
        rep = EliminationRepresentation((-1, 0, 0, 2), (5, 1, 7, 2))
        assert rep.root == 0
        assert rep.depths == (0, 1, 1, 2)
        assert rep.depth == 2
        assert rep.children == ((1, 2), (), (3,), ())
        assert rep.is_leaf(1) and not rep.is_leaf(2)
        assert rep.ancestors(3) == [3, 2, 0]
        assert rep.subtree_mask(2) == to_mask([7, 2])
        assert rep.vertex_set == to_mask([1, 2, 5, 7])

    def test_empty(self):
        rep = EliminationRepresentation.empty()
        assert rep.depth == -1
        assert rep.root is None

    def test_json(self):
        rep = EliminationRepresentation((-1, 0, 1), (4, 0, 2))
        obj = json.loads(json.dumps(rep.to_json()))
        assert obj == {"tree": [-1, 0, 1], "alpha": [4, 0, 2]}
        assert EliminationRepresentation.from_json(obj) == rep

    def test_from_forest(self):
        rep = EliminationRepresentation.from_forest({3: -1, 1: 3, 4: 3})
        assert rep.alpha == (1, 3, 4)
        assert rep.parent == (1, -1, 1)


class TestValidity:
    def test_path(self, p3):
        # middle vertex on top separates the ends
        assert validate_representation(p3, EliminationRepresentation((1, -1, 1), (0, 1, 2)))
        assert not validate_representation(p3, EliminationRepresentation((-1, 0, 0), (0, 1, 2)))
        assert validate_representation(p3, EliminationRepresentation((-1, 0, 1), (0, 1, 2)))

    def test_outside_graph(self, p3):
        with pytest.raises(PreconditionError):
            validate_representation(p3, EliminationRepresentation((-1,), (9,)))

    def test_brute_force_minimum_is_depth(self):
        for g in atlas_graphs(max_n=4, connected=False):
            for x in range(1, g.mask + 1):
                best = min(t.depth for t in trees_on(x) if validate_representation(g, t))
                assert best == depth(g, x), (g.edges(), x)

    def test_depth_of_empty_set(self, p3):
        assert depth(p3, 0) == -1
        assert depth_at_most(p3, 0, -1) == EliminationRepresentation.empty()

    @pytest.mark.parametrize("n, expected", [(1, 0), (2, 1), (3, 1), (4, 2), (7, 2), (8, 3)])
    def test_path_depth(self, n, expected):
        g = Graph.path(n)
        assert depth(g, g.mask) == expected

    def test_disconnected_graph_needs_one_root(self):
        g = Graph.empty(3)
        assert depth(g, g.mask) == 1

    @PROPERTY_SETTINGS
    @given(graphs_with_subset(max_n=6))
    def test_depth_at_most(self, pair):
        g, x = pair
        d = depth(g, x)
        rep = depth_at_most(g, x, d)
        assert rep is not None
        assert rep.vertex_set == x
        assert rep.depth <= d
        assert validate_representation(g, rep)
        if d >= 0:
            assert depth_at_most(g, x, d - 1) is None

    def test_depth_bound_below_minus_one(self, p3):
        with pytest.raises(PreconditionError):
            depth_at_most(p3, 1, -2)
        with pytest.raises(PreconditionError):
            depth(p3, 0b1000)


class TestNice:
    def test_make_nice_on_every_valid_tree(self):
        for g in atlas_graphs(max_n=4):
            for x in range(1, g.mask + 1):
                for t in trees_on(x):
                    if not validate_representation(g, t):
                        continue
                    nice = make_nice(g, t)
                    assert nice.alpha == t.alpha
                    assert validate_representation(g, nice)
                    assert is_nice(g, nice)
                    assert all(a <= b for a, b in zip(nice.depths, t.depths))
                    assert all(nice.is_leaf(i) for i in range(len(t)) if t.is_leaf(i))

    def test_path_tree_on_star_is_not_nice(self):
        g = Graph.star(2)
        rep = EliminationRepresentation((-1, 0, 1), (0, 1, 2))
        assert validate_representation(g, rep)
        assert not is_nice(g, rep)
        assert is_nice(g, make_nice(g, rep))

    def test_make_nice_needs_connected(self):
        with pytest.raises(PreconditionError):
            make_nice(Graph.empty(2), EliminationRepresentation((-1, 0), (0, 1)))

    def test_make_nice_rejects_invalid(self, p3):
        with pytest.raises(PreconditionError):
            make_nice(p3, EliminationRepresentation((-1, 0, 0), (0, 1, 2)))


class TestPropConditions:
    def test_anchors(self, p3):
        rep = EliminationRepresentation((-1,), (1,))
        assert anchors(p3, rep) == {0b001: 0, 0b100: 0}

    def test_anchor_is_deepest_touching_node(self):
        # path 0-1-2-3, X = {1, 2}, 1 on top
        g = Graph.path(4)
        rep = EliminationRepresentation((-1, 0), (1, 2))
        assert anchors(g, rep) == {0b0001: 0, 0b1000: 1}

    def test_single_leaf(self, p3):
        rep = EliminationRepresentation((-1,), (1,))
        assert check_prop_conditions(p3, rep, 1, catalog_formula("triangle_free"))
        assert not check_prop_conditions(p3, rep, 1, catalog_formula("all_equal"))
        # a shallow leaf may split its components instead
        assert check_prop_conditions(p3, rep, 2, catalog_formula("all_equal"))

    def test_too_deep(self, p3):
        rep = EliminationRepresentation((1, -1, 1), (0, 1, 2))
        assert not check_prop_conditions(p3, rep, 1, catalog_formula("triangle_free"))
        assert check_prop_conditions(p3, rep, 2, catalog_formula("triangle_free"))

    def test_empty_representation(self, p3):
        with pytest.raises(PreconditionError):
            check_prop_conditions(p3, EliminationRepresentation.empty(), 1, catalog_formula("all_equal"))

    @pytest.mark.parametrize("name", ["all_equal", "triangle_free", "nonadjacent_pair"])
    def test_found_representations_meet_the_conditions(self, name):
        f = catalog_formula(name)
        for g in atlas_graphs(max_n=5):
            for x in range(1, g.mask + 1):
                for k in (1, 2, 3):
                    rep = prop_representation(g, x, k, f)
                    if rep is None:
                        continue
                    assert rep.vertex_set == x
                    assert is_nice(g, rep)
                    assert check_prop_conditions(g, rep, k, f)

    def test_prop_representation_preconditions(self, p3):
        f = catalog_formula("all_equal")
        with pytest.raises(PreconditionError):
            prop_representation(Graph.empty(2), 1, 1, f)
        with pytest.raises(PreconditionError):
            prop_representation(p3, 0, 1, f)
        with pytest.raises(PreconditionError):
            prop_representation(p3, 1, 0, f)
