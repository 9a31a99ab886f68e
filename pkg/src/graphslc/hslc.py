"""Hierarchical single-linkage clustering of similarity graphs.

The clusters at level ``lam`` are the connected components of the links with
similarity ``>= lam``. The hierarchy is condensed with a minimum cluster size
and flattened by maximizing total persistence over disjoint clusters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .graph import Graph


@dataclass(frozen=True, eq=False)
class SimilarityGraph:
    """Items ``0..n_items-1`` joined by links ``(a[k], b[k])`` with score ``s[k]``."""

    n_items: int
    a: np.ndarray
    b: np.ndarray
    s: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.int64)
        b = np.asarray(self.b, dtype=np.int64)
        s = np.asarray(self.s, dtype=np.float64)
        if not (a.shape == b.shape == s.shape):
            raise ValueError("link arrays must have equal length")
        if len(a):
            if np.any(a == b):
                raise ValueError("self-links are not allowed")
            if min(a.min(), b.min()) < 0 or max(a.max(), b.max()) >= self.n_items:
                raise ValueError("link endpoint out of range")
            lo, hi = np.minimum(a, b), np.maximum(a, b)
            pairs = lo * self.n_items + hi
            if len(np.unique(pairs)) != len(pairs):
                raise ValueError("duplicate links")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("similarities must be finite and >= 0")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "s", s)

    @classmethod
    def from_graph(cls, g: Graph) -> "SimilarityGraph":
        return cls(g.n, g.u, g.v, g.w)


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, x: int, y: int) -> None:
        self.parent[self.find(x)] = self.find(y)


@dataclass(frozen=True, eq=False)
class MergeForest:
    """Single-linkage dendrogram with n-ary merges.

    Nodes ``0..n_items-1`` are the items; internal node ``n_items + k`` is the
    ``k``-th merge, joining ``children[k]`` at similarity ``level[k]``. Levels
    are non-increasing in ``k`` and all links of equal similarity merge in a
    single event per resulting component. ``roots`` lists the top node of
    every tree (one per connected component, isolated items included).
    """

    n_items: int
    level: np.ndarray
    children: list
    size: np.ndarray
    roots: np.ndarray

    def node_level(self, node: int) -> float:
        return float(self.level[node - self.n_items]) if node >= self.n_items else np.inf

    def node_children(self, node: int):
        return self.children[node - self.n_items] if node >= self.n_items else ()

    def leaves(self, node: int) -> list[int]:
        out, stack = [], [node]
        while stack:
            x = stack.pop()
            if x < self.n_items:
                out.append(x)
            else:
                stack.extend(self.children[x - self.n_items])
        return out

    def components_at(self, lam: float) -> list[frozenset]:
        """Components of the links with similarity ``>= lam``."""
        out, stack = [], list(self.roots)
        while stack:
            x = stack.pop()
            if x < self.n_items or self.level[x - self.n_items] >= lam:
                out.append(frozenset(self.leaves(x)))
            else:
                stack.extend(self.children[x - self.n_items])
        return out


def build_merge_forest(sim: SimilarityGraph) -> MergeForest:
    """Kruskal-style single linkage in descending similarity, ties grouped."""
    n = sim.n_items
    order = np.argsort(-sim.s, kind="stable")
    a, b, s = sim.a[order].tolist(), sim.b[order].tolist(), sim.s[order].tolist()
    uf = _UnionFind(n)
    node_of = list(range(n))  # union-find root -> current dendrogram node
    rep = list(range(n))      # dendrogram node -> one of its items
    sizes = [1] * n
    levels: list[float] = []
    children: list[list[int]] = []

    k = 0
    while k < len(s):
        lam = s[k]
        end = k
        touched = []
        while end < len(s) and s[end] == lam:
            ra, rb = uf.find(a[end]), uf.find(b[end])
            if ra != rb:
                touched.append(node_of[ra])
                touched.append(node_of[rb])
                uf.union(ra, rb)
            end += 1
        groups: dict[int, list[int]] = {}
        for node in dict.fromkeys(touched):
            groups.setdefault(uf.find(rep[node]), []).append(node)
        for root, kids in groups.items():
            new = len(sizes)
            levels.append(lam)
            children.append(sorted(kids))
            sizes.append(sum(sizes[c] for c in kids))
            rep.append(rep[kids[0]])
            node_of[root] = new
        k = end

    roots = sorted({node_of[uf.find(i)] for i in range(n)})
    return MergeForest(n, np.array(levels, dtype=np.float64), children,
                       np.array(sizes, dtype=np.int64), np.array(roots, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class CondensedTree:
    """Significant clusters of a merge forest.

    Cluster ids are assigned top-down, so a child's id exceeds its parent's.
    ``parent[c]`` is ``-1`` for root clusters (whole components). Each
    member record ``(rec_item, rec_cluster, rec_lambda)`` marks an item
    leaving cluster ``rec_cluster`` at level ``rec_lambda`` without passing
    into a child cluster; ``rec_noise`` flags items shed while the cluster
    survived (as opposed to items present at its final split). Items that pass
    into a child leave at the child's birth level. ``outliers`` are items of
    components smaller than ``m_s``.
    """

    n_items: int
    m_s: int
    parent: np.ndarray
    lambda_min: np.ndarray
    lambda_end: np.ndarray
    size: np.ndarray
    rec_item: np.ndarray
    rec_cluster: np.ndarray
    rec_lambda: np.ndarray
    rec_noise: np.ndarray
    outliers: np.ndarray
    _children: list = field(init=False, repr=False)

    def __post_init__(self):
        kids = [[] for _ in range(len(self.parent))]
        for c, p in enumerate(self.parent.tolist()):
            if p >= 0:
                kids[p].append(c)
        object.__setattr__(self, "_children", kids)

    @property
    def n_clusters(self) -> int:
        return len(self.parent)

    def children(self, c: int) -> list[int]:
        return self._children[c]

    def members(self, c: int) -> np.ndarray:
        """All items of cluster ``c`` at its birth."""
        stack, out = [c], []
        while stack:
            x = stack.pop()
            out.append(self.rec_item[self.rec_cluster == x])
            stack.extend(self._children[x])
        return np.sort(np.concatenate(out)) if out else np.zeros(0, dtype=np.int64)

    def exit_levels(self, c: int) -> dict[int, float]:
        """``lambda_max(item, c)`` for every member of ``c``."""
        out = {}
        mask = self.rec_cluster == c
        for i, lam in zip(self.rec_item[mask].tolist(), self.rec_lambda[mask].tolist()):
            out[i] = lam
        for child in self._children[c]:
            for i in self.members(child).tolist():
                out[i] = float(self.lambda_min[child])
        return out


def condense(forest: MergeForest, m_s: int) -> CondensedTree:
    """Prune the forest to clusters of at least ``m_s`` items.

    Walking each tree towards higher similarity, a split into children of
    which

    * none has ``m_s`` items ends the cluster (all items leave),
    * two or more have ``m_s`` items ends it and spawns those as new clusters,
    * exactly one has ``m_s`` items lets the cluster continue as that child
      while the small children are shed as noise.

    Components with at least ``m_s`` items are root clusters born at the
    level of their top merge.
    """
    if m_s < 2:
        raise ValueError("m_s must be >= 2")
    n = forest.n_items
    parent, lmin, lend, size = [], [], [], []
    items, clus, lams, noise = [], [], [], []
    outliers = []

    def new_cluster(p, lam, sz):
        parent.append(p)
        lmin.append(lam)
        lend.append(lam)
        size.append(sz)
        return len(parent) - 1

    def shed(node, c, lam, is_noise):
        leaves = forest.leaves(node)
        items.extend(leaves)
        clus.extend([c] * len(leaves))
        lams.extend([lam] * len(leaves))
        noise.extend([is_noise] * len(leaves))

    for root in forest.roots.tolist():
        if forest.size[root] < m_s:
            outliers.extend(forest.leaves(root))
            continue
        stack = [(root, new_cluster(-1, forest.node_level(root), int(forest.size[root])))]
        while stack:
            node, c = stack.pop()
            while True:
                lam = forest.node_level(node)
                kids = forest.node_children(node)
                big = [x for x in kids if forest.size[x] >= m_s]
                if len(big) == 1:
                    for x in kids:
                        if x != big[0]:
                            shed(x, c, lam, True)
                    node = big[0]
                    continue
                lend[c] = lam
                for x in kids:
                    if forest.size[x] < m_s:
                        shed(x, c, lam, False)
                fresh = [(x, new_cluster(c, lam, int(forest.size[x]))) for x in big]
                stack.extend(reversed(fresh))
                break

    return CondensedTree(
        n, m_s,
        np.array(parent, dtype=np.int64),
        np.array(lmin, dtype=np.float64),
        np.array(lend, dtype=np.float64),
        np.array(size, dtype=np.int64),
        np.array(items, dtype=np.int64),
        np.array(clus, dtype=np.int64),
        np.array(lams, dtype=np.float64),
        np.array(noise, dtype=bool),
        np.array(sorted(outliers), dtype=np.int64),
    )


def persistence(tree: CondensedTree) -> np.ndarray:
    """``sigma(C) = sum over members of (lambda_max(item, C) - lambda_min(C))``."""
    sigma = np.zeros(tree.n_clusters)
    np.add.at(sigma, tree.rec_cluster, tree.rec_lambda - tree.lambda_min[tree.rec_cluster])
    child = np.flatnonzero(tree.parent >= 0)
    p = tree.parent[child]
    np.add.at(sigma, p, tree.size[child] * (tree.lambda_min[child] - tree.lambda_min[p]))
    return sigma


@dataclass(frozen=True, eq=False)
class FlatClustering:
    """Clusters as sorted item arrays; items in no cluster are outliers."""

    n_items: int
    clusters: list
    cluster_ids: tuple = ()

    def __len__(self) -> int:
        return len(self.clusters)

    def covered(self) -> np.ndarray:
        if not self.clusters:
            return np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate(self.clusters))

    def outliers(self) -> np.ndarray:
        return np.setdiff1d(np.arange(self.n_items), self.covered())

    def as_sets(self) -> list[frozenset]:
        return [frozenset(c.tolist()) for c in self.clusters]


def select_clusters(tree: CondensedTree, sigma: np.ndarray | None = None,
                    allow_roots: bool = False) -> list[int]:
    """Ids of the persistence-maximizing antichain of clusters.

    A cluster is kept over its descendants only when its persistence strictly
    exceeds their best total; childless eligible clusters are always kept.

    Root clusters are ineligible unless ``allow_roots``, except when there are
    several of them: separate components then act as the children of a
    virtual root spanning all items, and are eligible like any other child.
    """
    sigma = persistence(tree) if sigma is None else sigma
    best = np.zeros(tree.n_clusters)
    own = np.zeros(tree.n_clusters, dtype=bool)
    roots_ok = allow_roots or int(np.sum(tree.parent < 0)) >= 2
    for c in range(tree.n_clusters - 1, -1, -1):
        eligible = roots_ok or tree.parent[c] >= 0
        kids = tree.children(c)
        below = sum(best[k] for k in kids)
        if eligible and (not kids or sigma[c] > below):
            best[c], own[c] = sigma[c], True
        else:
            best[c] = below
    chosen, stack = [], [c for c in range(tree.n_clusters) if tree.parent[c] < 0]
    while stack:
        c = stack.pop()
        if own[c]:
            chosen.append(c)
        else:
            stack.extend(tree.children(c))
    return sorted(chosen)


def select_flat(tree: CondensedTree, allow_roots: bool = False,
                sigma: np.ndarray | None = None) -> FlatClustering:
    """Disjoint clusters maximizing total persistence.

    Members of a selected cluster are all items that belonged to it, including
    those it shed before its end.
    """
    chosen = select_clusters(tree, sigma, allow_roots)
    return FlatClustering(tree.n_items, [tree.members(c) for c in chosen], tuple(chosen))


def project_edge_clusters(fc: FlatClustering, g: Graph) -> FlatClustering:
    """Node clusters made of the endpoints of each edge cluster."""
    clusters = [np.unique(np.concatenate([g.u[c], g.v[c]])) for c in fc.clusters]
    return FlatClustering(g.n, clusters, fc.cluster_ids)


def hslc(sim: SimilarityGraph, m_s: int, allow_roots: bool = False):
    """Forest, condensed tree and flat clustering in one call."""
    forest = build_merge_forest(sim)
    tree = condense(forest, m_s)
    return tree, select_flat(tree, allow_roots)


def write_condensed_csv(tree: CondensedTree, stream: IO[str]) -> None:
    sigma = persistence(tree)
    stream.write("cluster_id,parent_id,lambda_min,lambda_end,size_at_birth,persistence\n")
    for c in range(tree.n_clusters):
        p = "" if tree.parent[c] < 0 else str(tree.parent[c])
        stream.write(f"{c},{p},{float(tree.lambda_min[c])!r},{float(tree.lambda_end[c])!r},{tree.size[c]},{float(sigma[c])!r}\n")


def write_flat(fc: FlatClustering, labels: np.ndarray, stream: IO[str]) -> None:
    """One cluster per line, space-separated original labels."""
    for c in fc.clusters:
        stream.write(" ".join(str(x) for x in np.sort(labels[c])) + "\n")
