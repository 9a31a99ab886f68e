"""Similarity measure + HSLC, end to end."""

from __future__ import annotations

from dataclasses import dataclass

from . import edge_sim
from .edge_sim import EdgeSimilarity, LG_METHODS, node_method
from .graph import Graph
from .hslc import CondensedTree, FlatClustering, SimilarityGraph, hslc, project_edge_clusters
from .node_sim import NodeSimilarity

NODE_METHODS = ("sc", "rww", "n2v", "rnbrw", "simrank", "ecg")
EDGE_METHODS = ("lc", "lgtp", "eecg") + tuple(f"lg-{m}" for m in LG_METHODS)
METHODS = NODE_METHODS + EDGE_METHODS

# per-dataset minimum cluster sizes (node mode, edge mode)
MS_PRESETS = {
    "football": (5, 10),
    "mnist": (500, 2000),
    "dblp": (10, 15),
    "amazon": (10, 15),
}
DEFAULT_MS = 15


@dataclass(frozen=True, eq=False)
class ClusterResult:
    method: str
    similarity: NodeSimilarity | EdgeSimilarity
    tree: CondensedTree
    items: FlatClustering
    nodes: FlatClustering

    @property
    def edge_mode(self) -> bool:
        return isinstance(self.similarity, EdgeSimilarity)


def similarity(g: Graph, method: str, seed: int = 0, **params) -> NodeSimilarity | EdgeSimilarity:
    """Compute the similarity graph for ``method``.

    Recognized ``params``: ``iterations``, ``ell``, ``t``, ``samples``,
    ``ensemble``, ``p``, ``q``, ``walks_per_node``, ``walk_len``, ``d``.
    """
    if method in NODE_METHODS:
        return node_method(method, g, seed=seed, **params)
    if method == "lc":
        return edge_sim.link_communities(g)
    if method == "lgtp":
        return edge_sim.lgtp(g)
    if method == "eecg":
        return edge_sim.eecg(g, params.get("ensemble", 16), seed=seed)
    if method.startswith("lg-") and method[3:] in LG_METHODS:
        return edge_sim.lg_apply(g, method[3:], params, seed=seed)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def cluster(g: Graph, method: str, m_s: int = DEFAULT_MS, seed: int = 0,
            allow_roots: bool = False, **params) -> ClusterResult:
    """Cluster the nodes of ``g``.

    Node methods give disjoint node clusters; edge methods cluster edges and
    project them to their endpoints, so node clusters may overlap. Uncovered
    nodes are outliers either way.
    """
    sim = similarity(g, method, seed=seed, **params)
    tree, items = hslc(SimilarityGraph.from_graph(sim.as_graph()), m_s, allow_roots)
    nodes = project_edge_clusters(items, g) if isinstance(sim, EdgeSimilarity) else items
    return ClusterResult(method, sim, tree, items, nodes)


def summary(result: ClusterResult, n: int) -> dict:
    """Cluster count, largest cluster and coverage of the node clustering."""
    fc = result.nodes
    sizes = [len(c) for c in fc.clusters]
    return {
        "clusters": len(sizes),
        "max_cluster": max(sizes, default=0),
        "coverage": len(fc.covered()) / n if n else 0.0,
        "outliers": n - len(fc.covered()),
    }
