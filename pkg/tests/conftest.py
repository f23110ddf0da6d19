import random
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from elimdist.formula import CATALOG, catalog_formula
from elimdist.graph import Graph, is_connected

PROPERTY_SETTINGS = settings(
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)

CATALOG_NAMES = sorted(CATALOG)

# catalog sentences that are in S3 after padding
SIGMA3_NAMES = ["diameter_le_2", "nonadjacent_pair", "triangle_free"]


@st.composite
def graphs(draw: st.DrawFn, min_n: int = 0, max_n: int = 6) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, keep in zip(pairs, chosen) if keep])


@st.composite
def connected_graphs(draw: st.DrawFn, min_n: int = 1, max_n: int = 6) -> Graph:
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    # random spanning tree first, then extra edges
    edges = {(draw(st.integers(0, v - 1)), v) for v in range(1, n)}
    for e in combinations(range(n), 2):
        if e not in edges and draw(st.booleans()):
            edges.add(e)
    return Graph.from_edges(n, sorted(edges))


def graphs_with_subset(max_n: int = 5, connected: bool = False):
    base = connected_graphs(max_n=max_n) if connected else graphs(min_n=1, max_n=max_n)
    return base.flatmap(lambda g: st.tuples(st.just(g), st.integers(0, g.mask)))


def all_graphs(n: int):
    """Every labeled graph on n vertices."""
    pairs = list(combinations(range(n), 2))
    for bitset in range(1 << len(pairs)):
        yield Graph.from_edges(n, [e for i, e in enumerate(pairs) if bitset >> i & 1])


def atlas_graphs(max_n: int = 5, connected: bool = True):
    """networkx graph atlas, relabeled to elimdist graphs."""
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() > max_n or h.number_of_nodes() == 0:
            continue
        g = Graph.from_networkx(h)
        if connected and not is_connected(g):
            continue
        yield g


def random_connected(n: int, density: float, rng: random.Random) -> Graph:
    while True:
        g = Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < density])
        if is_connected(g):
            return g


@pytest.fixture(params=CATALOG_NAMES)
def catalog(request):
    return request.param, catalog_formula(request.param)


@pytest.fixture
def p3() -> Graph:
    return Graph.path(3)


@pytest.fixture
def k3() -> Graph:
    return Graph.complete(3)
