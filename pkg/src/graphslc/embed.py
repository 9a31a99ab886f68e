"""node2vec: biased second-order walks, skip-gram with negative sampling, and
the embedding-distance edge similarity."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

import numba
import numpy as np

from .graph import Graph
from .node_sim import NodeSimilarity


@dataclass(frozen=True, eq=False)
class WalkCorpus:
    """Walks stored row-wise, padded with ``-1`` past ``lengths[k]`` nodes."""

    walks: np.ndarray
    lengths: np.ndarray
    n: int
    walks_per_node: int
    walk_len: int

    def __len__(self) -> int:
        return len(self.walks)

    def __iter__(self):
        for row, ln in zip(self.walks, self.lengths):
            yield row[:ln]


@dataclass(frozen=True, eq=False)
class Embedding:
    """Input-side skip-gram vectors; rows of nodes without walks are unused."""

    vectors: np.ndarray
    has_vector: np.ndarray
    context: np.ndarray = field(repr=False, default=None)
    heldout_loss: np.ndarray = field(repr=False, default=None)

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]


@numba.njit(cache=True)
def _has_edge(indptr, nbrs, a, b):
    lo, hi = indptr[a], indptr[a + 1]
    k = lo + np.searchsorted(nbrs[lo:hi], b)
    return k < hi and nbrs[k] == b


@numba.njit(cache=True)
def _walk_kernel(indptr, nbrs, wts, starts, max_deg, walks_per_node, walk_len, p, q, seed):
    np.random.seed(seed)
    total = walks_per_node * len(starts)
    out = np.full((total, walk_len + 1), -1, dtype=np.int64)
    lengths = np.zeros(total, dtype=np.int64)
    probs = np.empty(max_deg)
    plain = p == 1.0 and q == 1.0
    row = 0
    for _ in range(walks_per_node):
        order = starts[np.random.permutation(len(starts))]
        for s in order:
            out[row, 0] = s
            ln = 1
            prev = -1
            cur = s
            for _ in range(walk_len):
                lo, hi = indptr[cur], indptr[cur + 1]
                tot = 0.0
                for idx in range(lo, hi):
                    x = nbrs[idx]
                    wt = wts[idx]
                    if not plain and prev >= 0:
                        if x == prev:
                            wt /= p
                        elif not _has_edge(indptr, nbrs, prev, x):
                            wt /= q
                    probs[idx - lo] = wt
                    tot += wt
                if tot <= 0.0:
                    break
                r = np.random.random() * tot
                k = hi - 1
                for idx in range(lo, hi):
                    r -= probs[idx - lo]
                    if r < 0.0:
                        k = idx
                        break
                prev = cur
                cur = nbrs[k]
                out[row, ln] = cur
                ln += 1
            lengths[row] = ln
            row += 1
    return out, lengths


def sample_walks(g: Graph, p: float = 1.0, q: float = 1.0, walks_per_node: int = 40,
                 walk_len: int = 80, seed: int = 0) -> WalkCorpus:
    """node2vec walks of ``walk_len`` steps from every non-isolated node.

    The unnormalized probability of stepping from ``cur`` (reached from
    ``prev``) to ``x`` is ``w(cur, x)`` times ``1/p`` if ``x == prev``, 1 if
    ``x`` neighbours ``prev`` and ``1/q`` otherwise.
    """
    if p <= 0 or q <= 0:
        raise ValueError("p and q must be positive")
    if walks_per_node < 1 or walk_len < 1:
        raise ValueError("walks_per_node and walk_len must be >= 1")
    wts = g.w[g.nbr_edges]
    deg = g.degrees
    starts = np.flatnonzero(deg > 0).astype(np.int64)
    walks, lengths = _walk_kernel(g.indptr, g.nbrs, wts, starts, max(1, int(deg.max(initial=0))),
                                  walks_per_node, walk_len,
                                  float(p), float(q), seed)
    return WalkCorpus(walks, lengths, g.n, walks_per_node, walk_len)


@numba.njit(cache=True, fastmath=True)
def _pair_loss(w_in, w_out, pairs):
    tot = 0.0
    for k in range(len(pairs)):
        x = 0.0
        for j in range(w_in.shape[1]):
            x += w_in[pairs[k, 0], j] * w_out[pairs[k, 1], j]
        tot += np.log1p(np.exp(-x)) if x > -30.0 else -x
    return tot / max(1, len(pairs))


@numba.njit(cache=True, inline="always")
def _xorshift(state):
    x = state[0]
    x ^= x >> np.uint64(12)
    x ^= x << np.uint64(25)
    x ^= x >> np.uint64(27)
    state[0] = x
    return x * np.uint64(2685821657736338717)


@numba.njit(cache=True, fastmath=True, error_model="numpy")
def _sgns_kernel(walks, lengths, n, dim, window, negatives, epochs, lr0, seed, neg_table, eval_pairs):
    # xorshift64* instead of np.random: the generator dominates the inner loop otherwise
    state = np.array([np.uint64(seed) * np.uint64(0x9E3779B97F4A7C15) + np.uint64(1)], dtype=np.uint64)
    w_in = np.empty((n, dim), dtype=np.float32)
    for i in range(n):
        for j in range(dim):
            w_in[i, j] = ((_xorshift(state) >> np.uint64(11)) * (1.0 / 9007199254740992.0) - 0.5) / dim
    w_out = np.zeros((n, dim), dtype=np.float32)
    grad = np.zeros(dim, dtype=np.float32)
    n_table = np.uint64(len(neg_table))
    uwin = np.uint64(window)
    total = lengths.sum() * epochs
    done = 0
    history = np.zeros(epochs)
    for ep in range(epochs):
        for r in range(len(walks)):
            ln = lengths[r]
            walk = walks[r]
            for pos in range(ln):
                lr = np.float32(lr0 * max(1e-4, 1.0 - done / (total + 1.0)))
                done += 1
                a = w_in[walk[pos]]
                span = window - np.int64((_xorshift(state) >> np.uint64(33)) % uwin)
                for c in range(max(0, pos - span), min(ln, pos + span + 1)):
                    if c == pos:
                        continue
                    ctx = walk[c]
                    for j in range(dim):
                        grad[j] = 0.0
                    for k in range(negatives + 1):
                        if k == 0:
                            target = ctx
                            label = np.float32(1.0)
                        else:
                            target = neg_table[(_xorshift(state) >> np.uint64(33)) % n_table]
                            if target == ctx:
                                continue
                            label = np.float32(0.0)
                        b = w_out[target]
                        x = np.float32(0.0)
                        for j in range(dim):
                            x += a[j] * b[j]
                        g = (label - np.float32(1.0) / (np.float32(1.0) + np.exp(-x))) * lr
                        for j in range(dim):
                            grad[j] += g * b[j]
                            b[j] += g * a[j]
                    for j in range(dim):
                        a[j] += grad[j]
        if len(eval_pairs):
            history[ep] = _pair_loss(w_in, w_out, eval_pairs)
    return w_in, w_out, history


def _negative_table(freq: np.ndarray) -> np.ndarray:
    """Node ids repeated in proportion to ``freq ** 0.75``."""
    # kept small enough to stay cache resident
    size = max(100_000, 20 * len(freq))
    weight = freq ** 0.75
    counts = np.floor(weight / weight.sum() * size).astype(np.int64)
    counts[weight > 0] = np.maximum(counts[weight > 0], 1)
    return np.repeat(np.arange(len(freq), dtype=np.int32), counts)


def train_sgns(corpus: WalkCorpus, d: int = 16, window: int = 10, negatives: int = 5,
               epochs: int = 1, lr: float = 0.025, seed: int = 0,
               eval_pairs: np.ndarray | None = None) -> Embedding:
    """Skip-gram with negative sampling over walk co-occurrences.

    Context windows are shrunk by a random amount per position, negatives come
    from the walk unigram distribution raised to 0.75 and the learning rate
    decays linearly. One epoch by default, as in the reference node2vec
    tooling. Single-threaded, so a fixed seed reproduces vectors exactly.

    Parameters
    ----------
    eval_pairs : np.ndarray, optional
        ``(k, 2)`` positive pairs; their mean logistic loss after each epoch is
        stored in ``Embedding.heldout_loss``.
    """
    if len(corpus) == 0:
        raise ValueError("empty walk corpus")
    if d < 1 or window < 1 or epochs < 1:
        raise ValueError("d, window and epochs must be >= 1")
    mask = corpus.walks >= 0
    freq = np.bincount(corpus.walks[mask], minlength=corpus.n).astype(np.float64)
    pairs = np.zeros((0, 2), dtype=np.int64) if eval_pairs is None else np.asarray(eval_pairs, dtype=np.int64)
    w_in, w_out, hist = _sgns_kernel(corpus.walks.astype(np.int32), corpus.lengths, corpus.n, d, window, negatives,
                                     epochs, lr, seed, _negative_table(freq), pairs)
    return Embedding(w_in.astype(np.float64), freq > 0, w_out.astype(np.float64),
                     hist if eval_pairs is not None else None)


def node2vec(g: Graph, p: float = 1.0, q: float = 1.0, walks_per_node: int = 40,
             walk_len: int = 80, d: int = 16, seed: int = 0, **sgns) -> Embedding:
    corpus = sample_walks(g, p, q, walks_per_node, walk_len, seed)
    return train_sgns(corpus, d=d, seed=seed, **sgns)


def n2v_edge_weights(g: Graph, emb: Embedding) -> NodeSimilarity:
    """``s(i, j) = 1 / (1 + ||v(i) - v(j)||)`` on every edge."""
    if g.m and not (emb.has_vector[g.u].all() and emb.has_vector[g.v].all()):
        raise ValueError("edge endpoint without an embedding")
    dist = np.linalg.norm(emb.vectors[g.u] - emb.vectors[g.v], axis=1)
    return NodeSimilarity(g, 1.0 / (1.0 + dist))


def write_embedding(g: Graph, emb: Embedding, stream: IO[str]) -> None:
    """One ``label v1 ... vd`` line per embedded node."""
    for i in np.flatnonzero(emb.has_vector):
        stream.write(" ".join([str(g.labels[i])] + [repr(float(x)) for x in emb.vectors[i]]) + "\n")
