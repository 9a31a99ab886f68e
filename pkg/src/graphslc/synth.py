"""Planted-partition benchmark graphs with outliers and overlapping communities.

A desk-scale stand-in for ABCD+o style generators: community sizes follow a
truncated power law, each community node spends a fraction ``1 - mu`` of its
edges inside one of its communities and ``mu`` anywhere, and outlier nodes
wire uniformly at random.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Iterable

import numpy as np

from .graph import Graph


@dataclass
class PlantedConfig:
    n: int = 1000
    mu: float = 0.2
    outlier_fraction: float = 0.0
    overlap_fraction: float = 0.0
    memberships: int = 2
    size_exponent: float = 1.5
    min_size: int = 20
    max_size: int = 100
    mean_degree: float = 10.0
    seed: int = 0

    def validate(self) -> None:
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if not 0 <= self.mu < 1:
            raise ValueError("mu must lie in [0, 1)")
        if not 0 <= self.outlier_fraction < 1:
            raise ValueError("outlier_fraction must lie in [0, 1)")
        if not 0 <= self.overlap_fraction < 1:
            raise ValueError("overlap_fraction must lie in [0, 1)")
        if self.memberships < 2:
            raise ValueError("memberships per overlapping node must be >= 2")
        if self.min_size < 2 or self.max_size < self.min_size:
            raise ValueError("need 2 <= min_size <= max_size")
        if not 0 < self.mean_degree < self.n:
            raise ValueError("mean_degree must lie in (0, n)")


@dataclass
class GroundTruth:
    """Communities as sorted node-id arrays; ``outliers`` belong to none."""

    labels: list
    outliers: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    def as_sets(self) -> list[frozenset]:
        return [frozenset(c.tolist()) for c in self.labels]

    def overlapping_nodes(self) -> np.ndarray:
        if not self.labels:
            return np.zeros(0, dtype=np.int64)
        counts = np.bincount(np.concatenate(self.labels))
        return np.flatnonzero(counts >= 2)


def _community_sizes(cfg: PlantedConfig, slots: int, rng: np.random.Generator) -> list[int]:
    support = np.arange(cfg.min_size, cfg.max_size + 1)
    prob = support.astype(np.float64) ** -cfg.size_exponent
    prob /= prob.sum()
    sizes: list[int] = []
    while sum(sizes) < slots:
        sizes.append(int(rng.choice(support, p=prob)))
    if sum(sizes) > slots:
        sizes.pop()
        deficit = slots - sum(sizes)
        if deficit >= cfg.min_size:
            sizes.append(deficit)
        else:
            k = 0
            while deficit:
                open_ = [i for i, s in enumerate(sizes) if s < cfg.max_size]
                if not open_:
                    raise ValueError("community sizes cannot fit the node count")
                sizes[open_[k % len(open_)]] += 1
                deficit -= 1
                k += 1
    return sizes


def generate(cfg: PlantedConfig) -> tuple[Graph, GroundTruth]:
    """Sample a graph and its planted communities; deterministic in ``cfg.seed``.

    Raises
    ------
    ValueError
        If the configuration is invalid or infeasible.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    n = cfg.n
    n_out = int(round(cfg.outlier_fraction * n))
    n_com = n - n_out
    n_ov = int(round(cfg.overlap_fraction * n_com))
    k = cfg.memberships
    slots = n_com + n_ov * (k - 1)
    if n_com and slots < cfg.min_size:
        raise ValueError("too few community nodes for min_size")
    sizes = _community_sizes(cfg, slots, rng) if n_com else []
    if n_ov and len(sizes) < k:
        raise ValueError("not enough communities for the requested memberships")

    perm = rng.permutation(n)
    outliers = np.sort(perm[:n_out])
    overlap = perm[n_out:n_out + n_ov]
    regular = perm[n_out + n_ov:]

    cap = np.array(sizes, dtype=np.int64)
    owned: list[list[int]] = [[] for _ in range(n)]
    members: list[list[int]] = [[] for _ in sizes]
    for node in overlap:
        avail = np.flatnonzero(cap > 0)
        if len(avail) < k:
            raise ValueError("community capacity exhausted by overlapping nodes")
        pick = rng.choice(avail, size=k, replace=False, p=cap[avail] / cap[avail].sum())
        for c in pick:
            cap[c] -= 1
            owned[node].append(int(c))
            members[c].append(int(node))
    slots_left = np.repeat(np.arange(len(sizes)), cap)
    rng.shuffle(slots_left)
    for node, c in zip(regular, slots_left):
        owned[node].append(int(c))
        members[c].append(int(node))
    member_arr = [np.array(sorted(m), dtype=np.int64) for m in members]

    half = cfg.mean_degree / 2
    edges = []
    for i in range(n):
        stubs = max(1, int(half) + int(rng.random() < half - int(half)))
        for _ in range(stubs):
            if owned[i] and rng.random() >= cfg.mu:
                pool = member_arr[owned[i][rng.integers(len(owned[i]))]]
                if len(pool) < 2:
                    continue
                j = i
                while j == i:
                    j = int(pool[rng.integers(len(pool))])
            else:
                j = int(rng.integers(n - 1))
                j += j >= i
            edges.append((i, j))
    g = Graph.from_edges(n, edges)
    labels = [m for m in member_arr if len(m)]
    return g, GroundTruth(labels, outliers)


def intra_fraction(g: Graph, truth: GroundTruth) -> float:
    """Fraction of edges whose endpoints share a planted community."""
    comms: list[set] = [set() for _ in range(g.n)]
    for c, members in enumerate(truth.labels):
        for x in members.tolist():
            comms[x].add(c)
    if not g.m:
        return 0.0
    inside = sum(bool(comms[a] & comms[b]) for a, b in zip(g.u.tolist(), g.v.tolist()))
    return inside / g.m


def read_ground_truth(stream: IO[str] | Iterable[str], g: Graph) -> GroundTruth:
    """One community per line of space-separated original labels.

    Nodes of ``g`` on no line are outliers.
    """
    index = {int(lab): i for i, lab in enumerate(g.labels.tolist())}
    labels = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        ids = []
        for tok in line:
            try:
                lab = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad label {tok!r}") from None
            if lab not in index:
                raise ValueError(f"line {lineno}: label {lab} is not a node of the graph")
            ids.append(index[lab])
        labels.append(np.unique(np.array(ids, dtype=np.int64)))
    covered = np.unique(np.concatenate(labels)) if labels else np.zeros(0, dtype=np.int64)
    return GroundTruth(labels, np.setdiff1d(np.arange(g.n), covered))


def write_ground_truth(truth: GroundTruth, labels: np.ndarray, stream: IO[str]) -> None:
    for c in truth.labels:
        stream.write(" ".join(str(x) for x in np.sort(labels[c])) + "\n")
