import random
from itertools import product

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import PROPERTY_SETTINGS, atlas_graphs, connected_graphs, graphs
from elimdist.elimination import depth
from elimdist.errors import GraphFormatError, PreconditionError
from elimdist.graph import (
    Graph, Separation, component_containing, components, components_touching, format_edge_list,
    is_connected, is_unbreakable, load_graph, neighborhood, parse_dimacs, parse_edge_list,
    random_unbreakable, to_mask, to_set, torso, tree_depth, write_edge_list,
)


def breakable_by_brute_force(g: Graph, p: int, q: int) -> bool:
    """Try every assignment of vertices to A-only, B-only or both."""
    verts = g.vertices()
    for sides in product((0, 1, 2), repeat=len(verts)):
        only_a = {v for v, s in zip(verts, sides) if s == 0}
        only_b = {v for v, s in zip(verts, sides) if s == 1}
        shared = len(verts) - len(only_a) - len(only_b)
        if shared > q or len(only_a) <= p or len(only_b) <= p:
            continue
        if not any(g.has_edge(u, v) for u in only_a for v in only_b):
            return True
    return False


class TestConstruction:
    def test_constructors(self):
        assert Graph.complete(4).edges() == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        assert Graph.path(3).edges() == [(0, 1), (1, 2)]
        assert len(Graph.cycle(5).edges()) == 5
        assert Graph.star(3).degree(0) == 3
        assert Graph.empty(3).edges() == []

    def test_disjoint_union(self):
        g = Graph.disjoint_union(Graph.complete(3), Graph.path(2))
        assert g.n == 5
        assert g.edges() == [(0, 1), (0, 2), (1, 2), (3, 4)]

    def test_rejects_bad_input(self):
        with pytest.raises(PreconditionError):
            Graph.from_edges(2, [(0, 0)])
        with pytest.raises(PreconditionError):
            Graph.from_edges(2, [(0, 2)])
        with pytest.raises(PreconditionError):
            Graph(2, (0b10, 0))
        with pytest.raises(PreconditionError):
            Graph.cycle(2)

    def test_from_networkx_keeps_labels(self):
        g = Graph.from_networkx(nx.path_graph(["a", "b", "c"]))
        assert g.labels == ("a", "b", "c")
        assert g.edges() == [(0, 1), (1, 2)]

    def test_views_keep_ids(self):
        g = Graph.path(5)
        view = g.minus(1 << 2)
        assert view.vertices() == [0, 1, 3, 4]
        assert view.edges() == [(0, 1), (3, 4)]
        assert 2 not in view
        assert view.view(0b11).edges() == [(0, 1)]
        with pytest.raises(PreconditionError):
            view.view(1 << 2)


class TestConnectivity:
    @PROPERTY_SETTINGS
    @given(graphs(max_n=8))
    def test_components_match_networkx(self, g):
        expected = sorted(sorted(c) for c in nx.connected_components(g.to_networkx()))
        assert sorted(sorted(to_set(c)) for c in components(g)) == expected
        assert is_connected(g) == (g.n > 0 and nx.is_connected(g.to_networkx()))

    def test_empty_graph_is_not_connected(self):
        assert not is_connected(Graph.empty(0))
        assert components(Graph.empty(0)) == []

    def test_component_containing(self):
        g = Graph.disjoint_union(Graph.path(3), Graph.path(2))
        assert component_containing(g, 0b101) == 0b111
        assert component_containing(g, 0b1001) == 0
        assert component_containing(g, 0) == 0
        assert components_touching(g, 0b1001) == 0b11111

    def test_neighborhood(self, p3):
        assert neighborhood(p3, 0b001) == 0b010
        assert neighborhood(p3, 0b010, closed=True) == 0b111
        with pytest.raises(PreconditionError):
            neighborhood(p3, 0b1000)


class TestUnbreakable:
    @PROPERTY_SETTINGS
    @given(graphs(min_n=1, max_n=6), st.integers(0, 2), st.integers(0, 2))
    def test_matches_brute_force(self, g, p, q):
        ok, sep = is_unbreakable(g, p, q)
        assert ok == (not breakable_by_brute_force(g, p, q))
        if not ok:
            assert sep.is_valid(g)
            assert sep.order <= q
            assert (sep.a & ~sep.b).bit_count() > p
            assert (sep.b & ~sep.a).bit_count() > p

    @pytest.mark.parametrize("n", [1, 4, 7])
    def test_cliques_are_unbreakable(self, n):
        assert is_unbreakable(Graph.complete(n), 2, 3) == (True, None)

    def test_long_path_breaks(self):
        g = Graph.path(7)
        ok, sep = is_unbreakable(g, 1, 1)
        assert not ok
        assert sep.is_valid(g)
        assert sep.order == 1

    def test_invalid_separation(self, p3):
        assert not Separation(0b001, 0b100).is_valid(p3)
        assert not Separation(0b011, 0b100).is_valid(p3)
        assert Separation(0b011, 0b110).is_valid(p3)

    def test_random_unbreakable(self):
        rng = random.Random(3)
        for _ in range(5):
            g = random_unbreakable(8, 1, 1, rng)
            assert g.n == 8
            assert is_unbreakable(g, 1, 1)[0]


class TestTorso:
    def test_torso_adds_cliques(self):
        # C5 minus {0}: neighbors 1 and 4 become adjacent
        t = torso(Graph.cycle(5), 0b11110)
        assert t.labels == (1, 2, 3, 4)
        assert t.has_edge(0, 3)
        assert len(t.edges()) == 4

    def test_torso_outside_raises(self, p3):
        with pytest.raises(PreconditionError):
            torso(p3, 0b1000)

    @pytest.mark.parametrize("g, expected", [
        (Graph.path(1), 1),
        (Graph.path(3), 2),
        (Graph.path(7), 3),
        (Graph.complete(4), 4),
        (Graph.star(5), 2),
        (Graph.cycle(4), 3),
        (Graph.disjoint_union(Graph.path(3), Graph.complete(3)), 3),
    ])
    def test_tree_depth(self, g, expected):
        assert tree_depth(g) == expected

    @PROPERTY_SETTINGS
    @given(connected_graphs(max_n=6).flatmap(lambda g: st.tuples(st.just(g), st.integers(1, g.mask))))
    def test_depth_is_torso_tree_depth_minus_one(self, pair):
        g, x = pair
        assert depth(g, x) + 1 == tree_depth(torso(g, x))

    def test_atlas_depth_of_whole_vertex_set(self):
        for g in atlas_graphs(max_n=5):
            assert depth(g, g.mask) + 1 == tree_depth(g)


class TestFiles:
    def test_edge_list_round_trip(self, tmp_path):
        g = Graph.cycle(5)
        path = tmp_path / "c5.el"
        write_edge_list(g, path)
        assert load_graph(path) == g

    def test_view_is_relabeled(self):
        text = format_edge_list(Graph.path(5).view(0b11010))
        assert text == "3 1\n1 2\n"

    def test_comments_are_ignored(self):
        g = parse_edge_list("# a triangle\n3 3\n0 1\n1 2 # last\n0 2\n")
        assert g == Graph.complete(3)

    @pytest.mark.parametrize("text", [
        "",
        "3\n",
        "3 2\n0 1\n",
        "3 1\n0 3\n",
        "3 1\n1 0\n",
        "3 2\n0 1\n0 1\n",
        "3 1\n0 x\n",
    ])
    def test_edge_list_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_edge_list(text)

    def test_dimacs(self, tmp_path):
        path = tmp_path / "p3.col"
        path.write_text("c path\np edge 3 2\ne 1 2\ne 3 2\n", encoding="utf-8")
        assert load_graph(path) == Graph.path(3)

    @pytest.mark.parametrize("text", [
        "e 1 2\n",
        "p edge 2 1\ne 1 3\n",
        "p edge 2\n",
        "q 1\n",
        "c only\n",
        "p edge 2 1\ne 1\n",
        "p edge 2 1\ne 1 2 3\n",
        "p edge x 1\n",
        "p edge -1 0\n",
        "p edge 2 1\ne a b\n",
    ])
    def test_dimacs_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_dimacs(text)

    def test_to_mask(self):
        assert to_mask([0, 3]) == 0b1001
