"""Similarity of adjacent nodes: short cycles, random-walk weighting, SimRank,
renewal non-backtracking walks and ensemble Louvain co-assignment.

Every measure returns one score per base edge, i.e. a re-weighting of the
graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np
import scipy.sparse as sp

from .graph import Graph


class ResourceLimitError(RuntimeError):
    """A computation would exceed its configured memory budget."""


class DegenerateError(RuntimeError):
    """The input admits no meaningful score (e.g. no cycles for RNBRW)."""


@dataclass(frozen=True, eq=False)
class NodeSimilarity:
    """Scores ``s(i, j)`` aligned with ``base``'s canonical edge list."""

    base: Graph
    scores: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.scores, dtype=np.float64)
        if s.shape != (self.base.m,):
            raise ValueError("one score per base edge required")
        if not np.all(np.isfinite(s)) or np.any(s < 0):
            raise ValueError("scores must be finite and >= 0")
        object.__setattr__(self, "scores", s)

    def as_graph(self) -> Graph:
        return self.base.with_weights(self.scores)


def rowwise_dot(a: sp.csr_matrix, b: sp.csr_matrix, ra: np.ndarray, rb: np.ndarray,
                chunk: int = 4096) -> np.ndarray:
    """``out[k] = a[ra[k]] . b[rb[k]]`` for sparse row-major matrices."""
    out = np.empty(len(ra))
    for s in range(0, len(ra), chunk):
        sl = slice(s, s + chunk)
        out[sl] = np.asarray(a[ra[sl]].multiply(b[rb[sl]]).sum(axis=1)).ravel()
    return out


def _check_budget(mat: sp.spmatrix, max_nnz: int | None, what: str) -> None:
    if max_nnz is not None and mat.nnz > max_nnz:
        raise ResourceLimitError(f"{what}: {mat.nnz} stored entries exceeds budget {max_nnz}")


def _transition(adj: sp.csr_matrix) -> sp.csr_matrix:
    rs = np.asarray(adj.sum(axis=1)).ravel()
    inv = np.divide(1.0, rs, out=np.zeros_like(rs), where=rs > 0)
    return sp.diags(inv) @ adj


# --------------------------------------------------------------------------
# short cycles
# --------------------------------------------------------------------------

def _cycle_counts(g: Graph, w: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Weighted triangle and rectangle counts through every edge."""
    a = g.with_weights(w).adjacency()
    u, v = g.u, g.v
    tri = rowwise_dot(a, a, u, v)
    a2 = a @ a
    walks3 = rowwise_dot(a, a2, u, v)
    sq = np.asarray(a.multiply(a).sum(axis=1)).ravel()
    # closed 3-walks i-x-y-j minus those with x == j or y == i (x == y is
    # impossible without self-loops)
    rect = walks3 - w * (sq[u] + sq[v]) + w ** 3
    return tri, np.maximum(rect, 0.0)


def short_cycle_weights(g: Graph, iterations: int = 3, weighted: bool = False) -> NodeSimilarity:
    """Edge weighting by normalized triangle and rectangle counts.

    For edge ``(i, j)`` the score is ``(t + r) / (t_max + r_max)`` with
    ``t_max = min(deg i, deg j) - 1`` and ``r_max = (deg i - 1)(deg j - 1)``
    (structural degrees), and ``t``/``r`` the weighted counts of triangles and
    4-cycles through the edge on the current weighting. Each iteration
    reweights the graph with the previous scores.

    Parameters
    ----------
    g : Graph
    iterations : int
        Number of reweighting rounds.
    weighted : bool
        Start from ``g.w`` instead of unit weights.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    deg = g.degrees.astype(np.float64)
    du, dv = deg[g.u], deg[g.v]
    norm = (np.minimum(du, dv) - 1) + (du - 1) * (dv - 1)
    w = g.w.copy() if weighted else np.ones(g.m)
    for _ in range(iterations):
        tri, rect = _cycle_counts(g, w)
        w = np.divide(tri + rect, norm, out=np.zeros(g.m), where=norm > 0)
    return NodeSimilarity(g, w)


# --------------------------------------------------------------------------
# random walk weighting
# --------------------------------------------------------------------------

def rww_weights(g: Graph, ell: int = 3, iterations: int = 3,
                max_nnz: int | None = 50_000_000) -> NodeSimilarity:
    """Cosine similarity of truncated walk-visit profiles.

    Each round builds ``P = T + T^2 + ... + T^ell`` from the row-normalized
    weighted adjacency ``T`` and scores edge ``(i, j)`` by the cosine of rows
    ``i`` and ``j`` of ``P``; the graph is then reweighted with the scores.
    A zero row gives score 0.
    """
    if ell < 1 or iterations < 1:
        raise ValueError("ell and iterations must be >= 1")
    u, v = g.u, g.v
    w = g.w.copy()
    for _ in range(iterations):
        t = _transition(g.with_weights(w).adjacency())
        tk = t
        p = t.copy()
        for _ in range(ell - 1):
            tk = tk @ t
            _check_budget(tk, max_nnz, "RWW walk matrix")
            p = p + tk
        p = p.tocsr()
        norms = np.sqrt(np.asarray(p.multiply(p).sum(axis=1)).ravel())
        dots = rowwise_dot(p, p, u, v)
        den = norms[u] * norms[v]
        w = np.clip(np.divide(dots, den, out=np.zeros(g.m), where=den > 0), 0.0, 1.0)
    return NodeSimilarity(g, w)


# --------------------------------------------------------------------------
# SimRank
# --------------------------------------------------------------------------

def simrank_weights(g: Graph, t: int = 3, weighted: bool = False,
                    max_nnz: int | None = 50_000_000) -> NodeSimilarity:
    """Neighbour-averaged SimRank after ``t`` rounds, on every edge.

    With ``s_0`` the identity, ``t`` rounds of neighbour averaging give
    ``S_t = W^t (W^t)^T`` for the row-normalized adjacency ``W``, so each edge
    score is the inner product of the two endpoints' ``t``-step walk
    distributions. Only rows reachable within ``t`` hops are ever stored.
    ``weighted`` uses weight-proportional transitions instead of ``1/|N(i)|``.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    w = _transition(g.adjacency(weighted=weighted))
    dist = w
    for _ in range(t - 1):
        dist = (dist @ w).tocsr()
        _check_budget(dist, max_nnz, "SimRank walk distributions")
    return NodeSimilarity(g, np.clip(rowwise_dot(dist, dist, g.u, g.v), 0.0, 1.0))


def simrank_memo(g: Graph, t: int = 3, max_pairs: int | None = 5_000_000) -> NodeSimilarity:
    """Literal memoized recursion over unordered node pairs.

    Slow, but a direct transcription of the recursion; kept as an independent
    route for :func:`simrank_weights`.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    nbrs = [g.neighbors(i).tolist() for i in range(g.n)]
    memo: dict[tuple[int, int, int], float] = {}

    def s(level: int, a: int, b: int) -> float:
        if level == 0:
            return 1.0 if a == b else 0.0
        if a > b:
            a, b = b, a
        key = (level, a, b)
        hit = memo.get(key)
        if hit is not None:
            return hit
        na, nb = nbrs[a], nbrs[b]
        total = 0.0
        for x in na:
            for y in nb:
                total += s(level - 1, x, y)
        val = total / (len(na) * len(nb))
        memo[key] = val
        if max_pairs is not None and len(memo) > max_pairs:
            raise ResourceLimitError(f"SimRank memo exceeds {max_pairs} pairs")
        return val

    scores = np.array([s(t, a, b) for a, b in zip(g.u.tolist(), g.v.tolist())])
    return NodeSimilarity(g, scores)


# --------------------------------------------------------------------------
# renewal non-backtracking random walks
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _rnbrw_kernel(indptr, nbrs, nbr_edges, wts, m, samples, seed, weighted):
    np.random.seed(seed)
    n = len(indptr) - 1
    counts = np.zeros(m, dtype=np.int64)
    stamp = np.zeros(n, dtype=np.int64)
    completed = 0
    for s in range(samples):
        mark = s + 1
        start = np.random.randint(n)
        lo, hi = indptr[start], indptr[start + 1]
        if hi == lo:
            continue
        stamp[start] = mark
        k = lo + np.random.randint(hi - lo)
        prev = start
        cur = nbrs[k]
        edge = nbr_edges[k]
        while True:
            if stamp[cur] == mark:
                counts[edge] += 1
                completed += 1
                break
            stamp[cur] = mark
            lo, hi = indptr[cur], indptr[cur + 1]
            d = hi - lo
            if d <= 1:
                break
            if weighted:
                tot = 0.0
                for idx in range(lo, hi):
                    if nbrs[idx] != prev:
                        tot += wts[idx]
                if tot <= 0.0:
                    break
                r = np.random.random() * tot
                k = -1
                for idx in range(lo, hi):
                    if nbrs[idx] != prev:
                        k = idx
                        r -= wts[idx]
                        if r < 0.0:
                            break
            else:
                r = np.random.randint(d - 1)
                pos = np.searchsorted(nbrs[lo:hi], prev)
                if r >= pos:
                    r += 1
                k = lo + r
            prev = cur
            cur = nbrs[k]
            edge = nbr_edges[k]
    return counts, completed


def rnbrw_weights(g: Graph, samples: int | None = None, seed: int = 0,
                  weighted: bool = False) -> NodeSimilarity:
    """Probability that each edge closes a renewal non-backtracking walk.

    A walk starts at a uniform vertex, steps along a uniform incident edge and
    then never immediately returns, stopping when it revisits a vertex; the
    closing edge is credited. Stuck walks are discarded and scores are
    normalized by the number of completed walks, so they sum to 1.

    Parameters
    ----------
    samples : int, optional
        Number of walks; defaults to the edge count.
    weighted : bool
        Choose steps proportionally to edge weight.

    Raises
    ------
    DegenerateError
        If no walk closes a cycle (e.g. forests).
    """
    samples = g.m if samples is None else samples
    if samples < 1:
        raise ValueError("samples must be >= 1")
    wts = g.w[g.nbr_edges]
    counts, done = _rnbrw_kernel(g.indptr, g.nbrs, g.nbr_edges, wts, g.m, samples, seed, weighted)
    if done == 0:
        raise DegenerateError("no non-backtracking walk closed a cycle")
    return NodeSimilarity(g, counts / done)


# --------------------------------------------------------------------------
# Louvain level one and ensemble co-assignment
# --------------------------------------------------------------------------

@numba.njit(cache=True)
def _louvain_kernel(indptr, nbrs, wts, order, max_sweeps):
    n = len(indptr) - 1
    # singleton communities are numbered in visiting order, so the
    # lowest-label tie rule does not favour small node ids across runs
    comm = np.empty(n, dtype=np.int64)
    for r in range(n):
        comm[order[r]] = r
    k = np.zeros(n)
    for i in range(n):
        for p in range(indptr[i], indptr[i + 1]):
            k[i] += wts[p]
    m2 = k.sum()
    if m2 <= 0.0:
        return comm
    tot = np.zeros(n)
    for i in range(n):
        tot[comm[i]] = k[i]
    link = np.zeros(n)
    seen = np.zeros(n, dtype=np.bool_)
    cand = np.empty(n, dtype=np.int64)
    for _ in range(max_sweeps):
        moved = False
        for i in order:
            ci = comm[i]
            nc = 0
            for p in range(indptr[i], indptr[i + 1]):
                c = comm[nbrs[p]]
                if not seen[c]:
                    seen[c] = True
                    cand[nc] = c
                    nc += 1
                link[c] += wts[p]
            tot[ci] -= k[i]
            best = ci
            best_gain = link[ci] - k[i] * tot[ci] / m2
            for q in range(nc):
                c = cand[q]
                if c == ci:
                    continue
                gain = link[c] - k[i] * tot[c] / m2
                if gain > best_gain + 1e-12:
                    best, best_gain = c, gain
                elif gain >= best_gain - 1e-12 and best != ci and c < best:
                    best = c
            tot[best] += k[i]
            if best != ci:
                comm[i] = best
                moved = True
            for q in range(nc):
                c = cand[q]
                seen[c] = False
                link[c] = 0.0
        if not moved:
            break
    return comm


def _dense_labels(comm: np.ndarray) -> np.ndarray:
    _, first, inv = np.unique(comm, return_index=True, return_inverse=True)
    rank = np.empty(len(first), dtype=np.int64)
    rank[np.argsort(first)] = np.arange(len(first))
    return rank[inv]


def louvain_level_one(g: Graph, seed: int = 0, max_sweeps: int = 1000) -> np.ndarray:
    """Local-moving phase of Louvain from singletons.

    Nodes are visited in a seeded random order; each moves to the neighbouring
    community with the largest strictly positive weighted modularity gain,
    ties going to the lowest community label. Singleton labels follow the
    visiting order. Sweeps repeat until nothing
    moves. Returns dense labels numbered by first appearance.
    """
    order = np.random.default_rng(seed).permutation(g.n)
    wts = g.w[g.nbr_edges]
    return _dense_labels(_louvain_kernel(g.indptr, g.nbrs, wts, order, max_sweeps))


def louvain_ensemble(g: Graph, ensemble: int = 16, seed: int = 0) -> np.ndarray:
    """``(ensemble, n)`` label matrix from runs seeded ``seed + r``."""
    if ensemble < 1:
        raise ValueError("ensemble must be >= 1")
    return np.stack([louvain_level_one(g, seed + r) for r in range(ensemble)])


def ecg_weights(g: Graph, ensemble: int = 16, seed: int = 0,
                runs: np.ndarray | None = None) -> NodeSimilarity:
    """Fraction of level-one Louvain runs that co-assign each edge's ends.

    ``runs`` may supply a precomputed :func:`louvain_ensemble` matrix.
    """
    runs = louvain_ensemble(g, ensemble, seed) if runs is None else runs
    same = runs[:, g.u] == runs[:, g.v]
    return NodeSimilarity(g, same.mean(axis=0) if g.m else np.zeros(0))
