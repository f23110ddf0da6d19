import random

import pytest

from conftest import all_graphs, random_connected
from elimdist.distance import Variant, at_most
from elimdist.elimination import depth
from elimdist.errors import PreconditionError, SizeCapExceeded
from elimdist.formula import catalog_formula, parse_formula, render_formula
from elimdist.graph import Graph, is_connected
from elimdist.msol import depth_formula, emit_msol, eval_msol, nice_depth_formula, node_count, render_msol

NAMES = ["all_equal", "nonadjacent_pair", "triangle_free"]


class TestAgainstSolvers:
    @pytest.mark.parametrize("name", NAMES)
    @pytest.mark.parametrize("variant", list(Variant))
    def test_all_graphs_up_to_four_vertices(self, name, variant):
        f = catalog_formula(name)
        sentences = [emit_msol(f, k, variant) for k in range(3)]
        for n in range(5):
            for g in all_graphs(n):
                for k, m in enumerate(sentences):
                    assert eval_msol(g, m, memo=True) == at_most(g, f, k, variant), (g.edges(), k)

    @pytest.mark.slow
    @pytest.mark.parametrize("variant", list(Variant))
    def test_random_five_vertex_graphs(self, variant):
        rng = random.Random(11)
        f = catalog_formula("triangle_free")
        sentences = [emit_msol(f, k, variant) for k in range(3)]
        for _ in range(15):
            g = random_connected(5, 0.6, rng)
            for k, m in enumerate(sentences):
                assert eval_msol(g, m, memo=True) == at_most(g, f, k, variant)

    def test_memo_does_not_change_answers(self, k3):
        f = catalog_formula("triangle_free")
        for variant in Variant:
            m = emit_msol(f, 1, variant)
            assert eval_msol(k3, m) == eval_msol(k3, m, memo=True) is True
            m = emit_msol(f, 0, variant)
            assert eval_msol(k3, m) == eval_msol(k3, m, memo=True) is False


class TestDepthFormulas:
    def test_depth_formula_matches_depth(self):
        formulas = {d: depth_formula(d) for d in range(-1, 4)}
        for n in range(1, 5):
            for g in all_graphs(n):
                for x in range(g.mask + 1):
                    d_true = depth(g, x)
                    for d in range(-1, 4):
                        got = eval_msol(g, formulas[d], {"X": x}, memo=True)
                        assert got == (d_true <= d), (g.edges(), x, d)

    def test_nice_formula_on_connected_graphs(self):
        formulas = {d: nice_depth_formula(d) for d in range(-1, 3)}
        for n in range(1, 5):
            for g in all_graphs(n):
                if not is_connected(g):
                    continue
                for x in range(g.mask + 1):
                    for d in range(-1, 3):
                        assert eval_msol(g, formulas[d], {"X": x}, memo=True) == (depth(g, x) <= d)

    def test_bounds(self):
        with pytest.raises(PreconditionError):
            depth_formula(-2)
        with pytest.raises(PreconditionError):
            nice_depth_formula(-2)


class TestShape:
    @pytest.mark.parametrize("variant", [Variant.CONN, Variant.PROP])
    def test_size_grows_linearly(self, variant):
        f = catalog_formula("triangle_free")
        counts = [node_count(emit_msol(f, k, variant)) for k in range(1, 7)]
        steps = {b - a for a, b in zip(counts, counts[1:])}
        assert len(steps) == 1

    def test_depth_size_grows_linearly(self):
        f = catalog_formula("triangle_free")
        counts = [node_count(emit_msol(f, k, Variant.DEPTH)) for k in range(2, 8)]
        steps = {b - a for a, b in zip(counts, counts[1:])}
        assert len(steps) == 1

    def test_render_conn_zero(self):
        f = catalog_formula("triangle_free")
        text = render_msol(emit_msol(f, 0, Variant.CONN))
        assert text == f"phi := {render_formula(f)}\nAX (comp(X) -> phi(X))"

    def test_render_prop_zero_is_phi(self):
        f = catalog_formula("diameter_le_2")
        assert render_msol(emit_msol(f, 0, Variant.PROP)) == render_formula(f)

    def test_render_depth_one(self):
        f = catalog_formula("all_equal")
        assert render_msol(emit_msol(f, 1, Variant.DEPTH)).splitlines() == [
            f"phi := {render_formula(f)}",
            "xt0 := ((X = {}) | (|X| = 1))",
            "EX (xt0(X) & phi(co(X)))",
        ]

    def test_definitions_are_printed_once(self):
        f = catalog_formula("triangle_free")
        lines = render_msol(emit_msol(f, 3, Variant.CONN)).splitlines()
        names = [line.split(" := ")[0] for line in lines[:-1]]
        assert names == ["phi", "psi0", "psi1", "psi2"]
        assert "psi2" in lines[-1]


class TestErrors:
    def test_size_cap(self):
        m = emit_msol(catalog_formula("all_equal"), 1, Variant.CONN)
        with pytest.raises(SizeCapExceeded):
            eval_msol(Graph.empty(7), m)
        assert eval_msol(Graph.empty(7), m, cap=7)

    def test_emit_errors(self):
        with pytest.raises(PreconditionError):
            emit_msol(catalog_formula("all_equal"), -1, Variant.CONN)
        with pytest.raises(PreconditionError):
            emit_msol(parse_formula("[x] (x = x)"), 1, Variant.CONN)
