"""Simple undirected weighted graphs, edge-list I/O and line graphs."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np
import scipy.sparse as sp


class GraphParseError(ValueError):
    """Malformed edge-list input."""


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph with dense node ids and a canonical edge list.

    Edges are stored with ``u < v``, sorted lexicographically. The adjacency
    is a CSR structure: the neighbours of node ``i`` are
    ``nbrs[indptr[i]:indptr[i + 1]]`` (sorted), and ``nbr_edges`` holds the
    edge id of each adjacency entry.

    Parameters
    ----------
    n : int
        Number of nodes.
    u, v : np.ndarray
        Endpoint arrays (``u < v``).
    w : np.ndarray
        Non-negative finite edge weights.
    labels : np.ndarray, optional
        Original integer label of each node; defaults to ``arange(n)``.
    """

    n: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    labels: np.ndarray = None
    indptr: np.ndarray = field(init=False, repr=False)
    nbrs: np.ndarray = field(init=False, repr=False)
    nbr_edges: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        u = np.ascontiguousarray(self.u, dtype=np.int64)
        v = np.ascontiguousarray(self.v, dtype=np.int64)
        w = np.ascontiguousarray(self.w, dtype=np.float64)
        if not (len(u) == len(v) == len(w)):
            raise ValueError("edge arrays must have equal length")
        if len(u):
            if np.any(u >= v):
                raise ValueError("edges must be canonical (u < v, no self-loops)")
            if u.min() < 0 or v.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            order = np.lexsort((v, u))
            u, v, w = u[order], v[order], w[order]
            if np.any((np.diff(u) == 0) & (np.diff(v) == 0)):
                raise ValueError("duplicate edge")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("edge weights must be finite and >= 0")
        labels = np.arange(self.n, dtype=np.int64) if self.labels is None else np.asarray(self.labels, dtype=np.int64)
        if len(labels) != self.n:
            raise ValueError("labels must have one entry per node")

        m = len(u)
        heads = np.concatenate([u, v])
        tails = np.concatenate([v, u])
        eids = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((tails, heads))
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(np.bincount(heads, minlength=self.n), out=indptr[1:])

        for name, arr in (("u", u), ("v", v), ("w", w), ("labels", labels),
                          ("indptr", indptr), ("nbrs", tails[order]), ("nbr_edges", eids[order])):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence], labels=None) -> "Graph":
        """Build a graph from ``(u, v)`` or ``(u, v, w)`` tuples over ``range(n)``.

        Orientation is normalized, self-loops dropped and duplicates merged
        keeping the maximum weight.
        """
        best: dict[tuple[int, int], float] = {}
        for e in edges:
            a, b = int(e[0]), int(e[1])
            wt = float(e[2]) if len(e) > 2 else 1.0
            if a == b:
                continue
            key = (a, b) if a < b else (b, a)
            if wt > best.get(key, -1.0):
                best[key] = wt
        keys = sorted(best)
        u = np.array([k[0] for k in keys], dtype=np.int64)
        v = np.array([k[1] for k in keys], dtype=np.int64)
        w = np.array([best[k] for k in keys], dtype=np.float64)
        return cls(n, u, v, w, labels)

    @property
    def m(self) -> int:
        return len(self.u)

    @property
    def degrees(self) -> np.ndarray:
        """Structural (unweighted) degrees."""
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.nbrs[self.indptr[i]:self.indptr[i + 1]]

    def incident_edges(self, i: int) -> np.ndarray:
        return self.nbr_edges[self.indptr[i]:self.indptr[i + 1]]

    def edge_id(self, a: int, b: int) -> int:
        """Edge id of ``{a, b}``; raises ``KeyError`` if absent."""
        nb = self.neighbors(a)
        k = np.searchsorted(nb, b)
        if k < len(nb) and nb[k] == b:
            return int(self.incident_edges(a)[k])
        raise KeyError((a, b))

    def has_edge(self, a: int, b: int) -> bool:
        nb = self.neighbors(a)
        k = np.searchsorted(nb, b)
        return bool(k < len(nb) and nb[k] == b)

    def with_weights(self, w: np.ndarray) -> "Graph":
        """Same structure, new weights (aligned with the edge list)."""
        return Graph(self.n, self.u, self.v, np.asarray(w, dtype=np.float64), self.labels)

    def adjacency(self, weighted: bool = True) -> sp.csr_matrix:
        """Symmetric sparse adjacency matrix."""
        data = self.w if weighted else np.ones(self.m)
        a = sp.coo_matrix((np.concatenate([data, data]),
                           (np.concatenate([self.u, self.v]), np.concatenate([self.v, self.u]))),
                          shape=(self.n, self.n))
        return a.tocsr()

    def edges(self) -> list[tuple[int, int, float]]:
        return list(zip(self.u.tolist(), self.v.tolist(), self.w.tolist()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def closed_neighborhood(g: Graph, i: int) -> set[int]:
    """``N[i]``: the neighbours of ``i`` together with ``i`` itself."""
    return set(g.neighbors(i).tolist()) | {int(i)}


@dataclass(frozen=True, eq=False)
class LineGraph:
    """Line graph of a base graph.

    ``graph`` has one node per base edge; ``shared[k]`` is the base node
    shared by the two base edges joined by line-graph link ``k``.
    """

    base: Graph
    graph: Graph
    shared: np.ndarray

    @property
    def links(self) -> tuple[np.ndarray, np.ndarray]:
        return self.graph.u, self.graph.v


def build_line_graph(g: Graph) -> LineGraph:
    """Line graph weighted by edge transition probabilities.

    The link between base edges ``e_ij`` and ``e_jk`` gets weight
    ``1 / deg(j)`` with ``deg`` the structural degree.
    """
    deg = g.degrees
    lu, lv, js = [], [], []
    for j in range(g.n):
        inc = g.incident_edges(j)
        d = len(inc)
        if d < 2:
            continue
        a, b = np.triu_indices(d, k=1)
        lu.append(inc[a])
        lv.append(inc[b])
        js.append(np.full(len(a), j, dtype=np.int64))
    if lu:
        lu, lv, js = np.concatenate(lu), np.concatenate(lv), np.concatenate(js)
    else:
        lu = lv = js = np.zeros(0, dtype=np.int64)
    lo, hi = np.minimum(lu, lv), np.maximum(lu, lv)
    order = np.lexsort((hi, lo))
    lo, hi, js = lo[order], hi[order], js[order]
    lg = Graph(g.m, lo, hi, 1.0 / deg[js])
    js.setflags(write=False)
    return LineGraph(g, lg, js)


def load_edge_list(stream: IO[str] | Iterable[str]) -> Graph:
    """Parse ``u v`` / ``u v w`` lines into a normalized :class:`Graph`.

    Labels are arbitrary non-negative integers, remapped to dense ids in
    ascending label order. ``#`` starts a comment. Self-loops are
    dropped and duplicate pairs keep the maximum weight.
    """
    raw_edges = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise GraphParseError(f"line {lineno}: expected 'u v' or 'u v w', got {raw.strip()!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
            wt = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise GraphParseError(f"line {lineno}: cannot parse {raw.strip()!r}") from None
        if a < 0 or b < 0:
            raise GraphParseError(f"line {lineno}: node labels must be non-negative")
        if not np.isfinite(wt) or wt < 0:
            raise ValueError(f"line {lineno}: weight must be finite and >= 0, got {wt}")
        raw_edges.append((a, b, wt))
    labels = sorted({x for e in raw_edges for x in e[:2]})
    index = {lab: i for i, lab in enumerate(labels)}
    edges = [(index[a], index[b], wt) for a, b, wt in raw_edges]
    return Graph.from_edges(len(labels), edges, np.array(labels, dtype=np.int64))


def write_edge_list(g: Graph, stream: IO[str], weights: bool = True) -> None:
    """Write edges using original labels."""
    lab = g.labels
    for a, b, wt in zip(g.u, g.v, g.w):
        if weights:
            stream.write(f"{lab[a]} {lab[b]} {float(wt)!r}\n")
        else:
            stream.write(f"{lab[a]} {lab[b]}\n")


def write_label_map(g: Graph, stream: IO[str]) -> None:
    """One ``internal_id original_label`` pair per line."""
    for i, lab in enumerate(g.labels):
        stream.write(f"{i} {lab}\n")
