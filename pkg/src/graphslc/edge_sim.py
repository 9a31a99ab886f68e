"""Similarity of adjacent edges.

Scores live on the links of the base graph's line graph: link ``k`` joins
base edges ``e_ij`` and ``e_jk`` that share node ``j = line.shared[k]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np
import scipy.sparse as sp

from . import embed, node_sim
from .graph import Graph, LineGraph, build_line_graph
from .node_sim import rowwise_dot


@dataclass(frozen=True, eq=False)
class EdgeSimilarity:
    base: Graph
    line: LineGraph
    scores: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.shape != (self.line.graph.m,):
            raise ValueError("one score per adjacent edge pair required")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("scores must be finite and >= 0")
        object.__setattr__(self, "scores", s)

    def as_graph(self) -> Graph:
        return self.line.graph.with_weights(self.scores)


def outer_endpoints(line: LineGraph) -> tuple[np.ndarray, np.ndarray]:
    """Non-shared endpoints ``(i, k)`` of every adjacent pair ``(e_ij, e_jk)``."""
    g = line.base
    e1, e2 = line.links
    j = line.shared
    i = np.where(g.u[e1] == j, g.v[e1], g.u[e1])
    k = np.where(g.u[e2] == j, g.v[e2], g.u[e2])
    return i, k


def _line(g: Graph, line: LineGraph | None) -> LineGraph:
    return build_line_graph(g) if line is None else line


def link_communities(g: Graph, line: LineGraph | None = None) -> EdgeSimilarity:
    """Jaccard similarity of the closed neighbourhoods of the outer endpoints.

    ``s(e_ij, e_jk) = |N[i] & N[k]| / |N[i] | N[k]|``.
    """
    line = _line(g, line)
    i, k = outer_endpoints(line)
    closed = (g.adjacency(weighted=False) + sp.identity(g.n, format="csr")).tocsr()
    inter = rowwise_dot(closed, closed, i, k)
    size = g.degrees + 1.0
    union = size[i] + size[k] - inter
    return EdgeSimilarity(g, line, inter / union)


def lgtp(g: Graph, line: LineGraph | None = None) -> EdgeSimilarity:
    """Edge-walk transition probability ``1 / deg(j)`` through the shared node."""
    line = _line(g, line)
    return EdgeSimilarity(g, line, line.graph.w.copy())


# line-graph sampling for node2vec is reduced to keep the walk corpus tractable
LG_N2V_DEFAULTS = {"walks_per_node": 10, "walk_len": 20}

LG_METHODS = ("sc", "rww", "n2v", "ecg", "rnbrw", "simrank")


def node_method(method: str, g: Graph, seed: int = 0, weighted: bool = False, **params) -> node_sim.NodeSimilarity:
    """Run a node-similarity method by id.

    ``weighted`` makes methods that would otherwise ignore ``g.w`` consume it
    (initial cycle weights, SimRank transitions, RNBRW steps); RWW, node2vec
    and ECG always use the graph's weights.
    """
    if method == "sc":
        return node_sim.short_cycle_weights(g, params.get("iterations", 3), weighted=weighted)
    if method == "rww":
        return node_sim.rww_weights(g, params.get("ell", 3), params.get("iterations", 3))
    if method == "simrank":
        return node_sim.simrank_weights(g, params.get("t", 3), weighted=weighted)
    if method == "rnbrw":
        return node_sim.rnbrw_weights(g, params.get("samples"), seed=seed, weighted=weighted)
    if method == "ecg":
        return node_sim.ecg_weights(g, params.get("ensemble", 16), seed=seed)
    if method == "n2v":
        emb = embed.node2vec(g, p=params.get("p", 1.0), q=params.get("q", 1.0),
                             walks_per_node=params.get("walks_per_node", 40),
                             walk_len=params.get("walk_len", 80), d=params.get("d", 16), seed=seed)
        return embed.n2v_edge_weights(g, emb)
    raise ValueError(f"unknown node similarity method {method!r}")


def lg_apply(g: Graph, method: str, params: dict | None = None, seed: int = 0,
             line: LineGraph | None = None) -> EdgeSimilarity:
    """Run a node-similarity method on the transition-weighted line graph."""
    if method not in LG_METHODS:
        raise ValueError(f"method must be one of {LG_METHODS}, got {method!r}")
    line = _line(g, line)
    params = dict(params or {})
    if method == "n2v":
        params = {**LG_N2V_DEFAULTS, **params}
    sim = node_method(method, line.graph, seed=seed, weighted=True, **params)
    return EdgeSimilarity(g, line, sim.scores)


def eecg(g: Graph, ensemble: int = 16, seed: int = 0, runs: np.ndarray | None = None,
         line: LineGraph | None = None) -> EdgeSimilarity:
    """Fraction of level-one Louvain runs placing all three nodes of a 2-path together."""
    line = _line(g, line)
    runs = node_sim.louvain_ensemble(g, ensemble, seed) if runs is None else runs
    i, k = outer_endpoints(line)
    j = line.shared
    together = (runs[:, i] == runs[:, j]) & (runs[:, j] == runs[:, k])
    return EdgeSimilarity(g, line, together.mean(axis=0) if len(j) else np.zeros(0))


def write_edge_scores(sim: EdgeSimilarity, stream: IO[str]) -> None:
    """``u1 v1 u2 v2 score`` per adjacent pair, in original labels."""
    g = sim.base
    lab = g.labels
    e1, e2 = sim.line.links
    for a, b, s in zip(e1, e2, sim.scores):
        stream.write(f"{lab[g.u[a]]} {lab[g.v[a]]} {lab[g.u[b]]} {lab[g.v[b]]} {float(s)!r}\n")
