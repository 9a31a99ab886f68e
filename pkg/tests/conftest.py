import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from graphslc.graph import Graph

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def graphs(draw, min_n=2, max_n=12, weighted=False):
    """Random simple graphs, optionally with positive weights."""
    n = draw(st.integers(min_n, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    if weighted:
        w = draw(st.lists(st.floats(0.1, 5.0), min_size=len(chosen), max_size=len(chosen)))
    else:
        w = [1.0] * len(chosen)
    return Graph.from_edges(n, [(a, b, x) for (a, b), x in zip(chosen, w)])


def clique(nodes):
    return [(a, b) for a, b in itertools.combinations(nodes, 2)]


@pytest.fixture
def triangle():
    return Graph.from_edges(3, clique(range(3)))


@pytest.fixture
def path3():
    return Graph.from_edges(3, [(0, 1), (1, 2)])


@pytest.fixture
def two_triangles():
    return Graph.from_edges(6, clique(range(3)) + clique(range(3, 6)))


@pytest.fixture
def barbell():
    return Graph.from_edges(6, clique(range(3)) + clique(range(3, 6)) + [(2, 3)])


def random_graph(rng, n, p):
    edges = [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)
