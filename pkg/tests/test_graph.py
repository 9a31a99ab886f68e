import io
from math import comb

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import clique, graphs
from graphslc.graph import (Graph, GraphParseError, build_line_graph, closed_neighborhood,
                            load_edge_list, write_edge_list, write_label_map)


def test_load_plain():
    g = load_edge_list(io.StringIO("0 1\n1 2\n"))
    assert g.n == 3
    assert g.edges() == [(0, 1, 1.0), (1, 2, 1.0)]


def test_load_drops_self_loop_and_remaps():
    g = load_edge_list(io.StringIO("5 5\n5 7\n"))
    assert (g.n, g.m) == (2, 1)
    assert g.labels.tolist() == [5, 7]
    assert g.edges() == [(0, 1, 1.0)]


def test_load_duplicate_keeps_max():
    g = load_edge_list(io.StringIO("0 1 2.0\n1 0 3.0\n"))
    assert g.edges() == [(0, 1, 3.0)]


def test_load_comments_and_blank_lines():
    g = load_edge_list(io.StringIO("# header\n\n3 9  # trailing\n"))
    assert g.labels.tolist() == [3, 9] and g.m == 1


@pytest.mark.parametrize("text, line", [("0 1\n0\n", 2), ("0 1 2 3\n", 1), ("a b\n", 1), ("0 -1\n", 1)])
def test_load_parse_errors_cite_line(text, line):
    with pytest.raises(GraphParseError, match=f"line {line}"):
        load_edge_list(io.StringIO(text))


@pytest.mark.parametrize("w", ["-1", "nan", "inf"])
def test_load_rejects_bad_weight(w):
    with pytest.raises(ValueError):
        load_edge_list(io.StringIO(f"0 1 {w}\n"))


def test_graph_rejects_noncanonical():
    with pytest.raises(ValueError):
        Graph(3, np.array([1]), np.array([0]), np.array([1.0]))
    with pytest.raises(ValueError):
        Graph(3, np.array([0, 0]), np.array([1, 1]), np.array([1.0, 1.0]))


def test_closed_neighborhood():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert closed_neighborhood(path, 1) == {0, 1, 2}
    assert closed_neighborhood(Graph.from_edges(2, []), 1) == {1}
    assert closed_neighborhood(Graph.from_edges(3, clique(range(3))), 0) == {0, 1, 2}


def test_line_graph_examples():
    lg = build_line_graph(Graph.from_edges(3, [(0, 1), (1, 2)]))
    assert lg.graph.edges() == [(0, 1, 0.5)]
    assert lg.shared.tolist() == [1]
    star = build_line_graph(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert star.graph.m == 3 and np.allclose(star.graph.w, 1 / 3)
    tri = build_line_graph(Graph.from_edges(3, clique(range(3))))
    assert tri.graph.m == 3 and np.allclose(tri.graph.w, 0.5)


@given(graphs(max_n=10))
def test_line_graph_counts_and_adjacency(g):
    lg = build_line_graph(g)
    assert lg.graph.n == g.m
    assert lg.graph.m == sum(comb(int(d), 2) for d in g.degrees)
    # a link exists iff the two base edges share an endpoint, weight 1/deg(shared)
    ends = [{a, b} for a, b in zip(g.u.tolist(), g.v.tolist())]
    expect = {(x, y) for x in range(g.m) for y in range(x + 1, g.m) if ends[x] & ends[y]}
    got = set(zip(lg.graph.u.tolist(), lg.graph.v.tolist()))
    assert got == expect
    for x, y, wt, j in zip(lg.graph.u, lg.graph.v, lg.graph.w, lg.shared):
        assert ends[x] & ends[y] == {int(j)}
        assert wt == 1.0 / g.degrees[j]


@given(graphs(max_n=10, weighted=True))
def test_adjacency_consistent_with_edges(g):
    seen = []
    for i in range(g.n):
        for j, e in zip(g.neighbors(i), g.incident_edges(i)):
            assert {g.u[e], g.v[e]} == {i, j}
            assert g.edge_id(i, j) == e and g.has_edge(j, i)
            seen.append(int(e))
    assert sorted(seen) == sorted(list(range(g.m)) * 2)
    a = g.adjacency().toarray()
    assert np.array_equal(a, a.T)


@given(graphs(max_n=10, weighted=True), st.integers(0, 10**6))
def test_round_trip(g, offset):
    relabeled = Graph(g.n, g.u, g.v, g.w, np.arange(g.n) * 3 + offset)
    isolated = set(np.flatnonzero(g.degrees == 0).tolist())
    buf = io.StringIO()
    write_edge_list(relabeled, buf)
    back = load_edge_list(io.StringIO(buf.getvalue()))
    # isolated nodes are absent from an edge list; the rest map back exactly
    assert back.n == g.n - len(isolated)
    lab = dict(zip(relabeled.labels.tolist(), range(g.n)))
    got = sorted((lab[back.labels[a]], lab[back.labels[b]], w) for a, b, w in back.edges())
    assert got == g.edges()


def test_label_map_output():
    g = load_edge_list(io.StringIO("10 20\n20 5\n"))
    buf = io.StringIO()
    write_label_map(g, buf)
    assert buf.getvalue() == "0 5\n1 10\n2 20\n"


def test_graph_arrays_are_read_only():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError):
        g.w[0] = 2.0
