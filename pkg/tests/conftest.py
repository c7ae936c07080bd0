"""Shared corpus fixtures: named graphs, orientations, cached decompositions."""

from __future__ import annotations

import numpy as np
import pytest

from qwalk import (
    Graph,
    OrientedGraph,
    complete_graph,
    cycle_graph,
    decompose_graph,
    decompose_oriented,
    disjoint_union,
    path_graph,
    star_graph,
)


@pytest.fixture(scope="session")
def k2():
    return complete_graph(2)


@pytest.fixture(scope="session")
def p3():
    return path_graph(3)


@pytest.fixture(scope="session")
def p4():
    return path_graph(4)


@pytest.fixture(scope="session")
def p5():
    return path_graph(5)


@pytest.fixture(scope="session")
def c3():
    return cycle_graph(3)


@pytest.fixture(scope="session")
def c4():
    return cycle_graph(4)


@pytest.fixture(scope="session")
def k13():
    return star_graph(3)  # center is vertex 0


@pytest.fixture(scope="session")
def k2_union_p3(k2, p3):
    return disjoint_union(k2, p3)


@pytest.fixture(scope="session")
def oriented_c3():
    return OrientedGraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


_decomp_cache: dict = {}


@pytest.fixture(scope="session")
def decomp():
    """Cached spectral decompositions keyed by the graph object."""

    def get(x):
        key = (type(x).__name__, x.n, tuple(sorted(x.arcs if isinstance(x, OrientedGraph) else x.edges)))
        if key not in _decomp_cache:
            if isinstance(x, OrientedGraph):
                _decomp_cache[key] = decompose_oriented(x)
            else:
                _decomp_cache[key] = decompose_graph(x)
        return _decomp_cache[key]

    return get


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260810)


def random_graph(rng, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def random_orientation(rng, g: Graph) -> OrientedGraph:
    arcs = [(u, v) if rng.random() < 0.5 else (v, u) for u, v in sorted(g.edges)]
    return OrientedGraph.from_arcs(g.n, arcs)
