import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import clique, graphs
from graphslc.edge_sim import (eecg, lg_apply, lgtp, link_communities, outer_endpoints,
                               write_edge_scores)
from graphslc.graph import Graph, build_line_graph, closed_neighborhood
from graphslc.node_sim import ecg_weights, louvain_ensemble


def pair_score(sim, e1, e2):
    lg = sim.line.graph
    a, b = min(e1, e2), max(e1, e2)
    return sim.scores[lg.edge_id(a, b)]


def test_lc_examples():
    tri = Graph.from_edges(3, clique(range(3)))
    assert np.array_equal(link_communities(tri).scores, [1.0, 1.0, 1.0])
    path = link_communities(Graph.from_edges(3, [(0, 1), (1, 2)]))
    assert np.allclose(path.scores, [1 / 3])
    star = link_communities(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]))
    assert np.allclose(star.scores, 1 / 3)


@given(graphs(max_n=10))
def test_lc_matches_set_jaccard(g):
    sim = link_communities(g)
    i, k = outer_endpoints(sim.line)
    for x, (a, b) in enumerate(zip(i.tolist(), k.tolist())):
        na, nb = closed_neighborhood(g, a), closed_neighborhood(g, b)
        assert sim.scores[x] == pytest.approx(len(na & nb) / len(na | nb), abs=1e-15)
        if na == nb:
            assert sim.scores[x] == 1.0
    assert np.all((sim.scores >= 0) & (sim.scores <= 1))


def test_lc_symmetric_in_edge_order():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
    sim = link_communities(g)
    i, k = outer_endpoints(sim.line)
    # swapping the roles of the two edges swaps i and k; Jaccard is symmetric
    assert np.array_equal(link_communities(g).scores, sim.scores)
    for x in range(len(i)):
        assert (i[x], k[x]) != (k[x], i[x]) or i[x] == k[x]


def test_lgtp_examples():
    assert lgtp(Graph.from_edges(3, [(0, 1), (1, 2)])).scores.tolist() == [0.5]
    star = lgtp(Graph.from_edges(6, [(0, k) for k in range(1, 6)]))
    assert len(star.scores) == 10 and np.allclose(star.scores, 0.2)
    assert np.allclose(lgtp(Graph.from_edges(3, clique(range(3)))).scores, 0.5)


@given(graphs(max_n=10))
def test_lgtp_equals_line_weights(g):
    sim = lgtp(g)
    assert np.array_equal(sim.scores, build_line_graph(g).graph.w)
    assert np.array_equal(sim.scores, 1.0 / g.degrees[sim.line.shared])


def test_eecg_two_triangles(two_triangles):
    s = eecg(two_triangles, 16, seed=0).scores
    assert np.all(s == 1.0)


@given(graphs(max_n=10), st.integers(0, 500))
@settings(max_examples=30)
def test_eecg_bounded_by_ecg(g, seed):
    runs = louvain_ensemble(g, 16, seed)
    ecg = ecg_weights(g, runs=runs).scores
    sim = eecg(g, runs=runs)
    assert np.allclose(sim.scores * 16, np.round(sim.scores * 16))
    e1, e2 = sim.line.links
    assert np.all(sim.scores <= np.minimum(ecg[e1], ecg[e2]))


def test_lg_ecg_bridge_scores_lower(barbell):
    sim = lg_apply(barbell, "ecg", seed=0)
    bridge = barbell.edge_id(2, 3)
    e1, e2 = sim.line.links
    touches = (e1 == bridge) | (e2 == bridge)
    ends = [{a, b} for a, b in zip(barbell.u.tolist(), barbell.v.tolist())]
    inside = np.array([not touches[x] and len(ends[e1[x]] | ends[e2[x]]) == 3
                       and (max(ends[e1[x]] | ends[e2[x]]) < 3 or min(ends[e1[x]] | ends[e2[x]]) >= 3)
                       for x in range(len(e1))])
    assert sim.scores[inside].min() > sim.scores[touches].max()


def test_lg_sc_on_path_is_zero():
    path = Graph.from_edges(6, [(k, k + 1) for k in range(5)])
    assert np.all(lg_apply(path, "sc").scores == 0)


@pytest.mark.parametrize("method", ["n2v", "ecg", "rnbrw"])
def test_lg_randomized_deterministic(barbell, method):
    a = lg_apply(barbell, method, seed=5).scores
    b = lg_apply(barbell, method, seed=5).scores
    assert np.array_equal(a, b)


@pytest.mark.parametrize("method", ["sc", "rww", "simrank", "ecg", "rnbrw", "n2v"])
def test_lg_methods_shapes(barbell, method):
    sim = lg_apply(barbell, method, seed=1)
    assert sim.scores.shape == (sim.line.graph.m,)
    assert np.all(sim.scores >= 0)


def test_lg_rejects_unknown():
    with pytest.raises(ValueError):
        lg_apply(Graph.from_edges(3, [(0, 1), (1, 2)]), "lc")


def test_edge_score_dump_uses_labels():
    g = Graph.from_edges(3, [(0, 1), (1, 2)], labels=np.array([10, 20, 30]))
    buf = io.StringIO()
    write_edge_scores(lgtp(g), buf)
    assert buf.getvalue() == "10 20 20 30 0.5\n"
