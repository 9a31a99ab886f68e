"""Size-weighted best-match precision, recall and F1, plus coverage."""

from __future__ import annotations

from dataclasses import dataclass, asdict
from typing import Iterable

import numpy as np
import scipy.sparse as sp

CSV_FIELDS = ("precision", "recall", "f1", "coverage", "clusters", "max_cluster", "empty")


@dataclass(frozen=True)
class EvaluationReport:
    precision: float
    recall: float
    f1: float
    coverage: float
    clusters: int
    max_cluster: int
    empty: bool = False

    def to_text(self) -> str:
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items())

    def csv_header(self) -> str:
        return ",".join(CSV_FIELDS)

    def csv_row(self) -> str:
        return ",".join(str(getattr(self, k)) for k in CSV_FIELDS)


def pair_scores(cluster: Iterable[int], label: Iterable[int]) -> tuple[float, float, float]:
    """Precision, recall and F1 of one predicted cluster against one label."""
    c, lab = set(cluster), set(label)
    if not c or not lab:
        raise ValueError("cluster and label must be nonempty")
    hit = len(c & lab)
    p, r = hit / len(c), hit / len(lab)
    return p, r, (2 * p * r / (p + r) if hit else 0.0)


def coverage(clusters: Iterable[Iterable[int]], n: int) -> float:
    """Fraction of the ``n`` items in at least one cluster."""
    covered = set()
    for c in clusters:
        covered.update(c)
    return len(covered) / n if n else 0.0


def weighted_scores(clusters: Iterable[Iterable[int]], labels: Iterable[Iterable[int]],
                    n: int) -> EvaluationReport:
    """Best-match scores per predicted cluster, averaged with size weights.

    Each cluster takes its maximum precision, recall and F1 over all labels
    independently. An empty prediction gives zeros with ``empty=True``.
    """
    clusters = [np.unique(np.fromiter(c, dtype=np.int64)) for c in clusters]
    clusters = [c for c in clusters if len(c)]
    labels = [np.unique(np.fromiter(l, dtype=np.int64)) for l in labels]
    labels = [l for l in labels if len(l)]
    if not clusters:
        return EvaluationReport(0.0, 0.0, 0.0, 0.0, 0, 0, empty=True)
    cov = coverage((c.tolist() for c in clusters), n)
    sizes = np.array([len(c) for c in clusters], dtype=np.float64)
    if not labels:
        return EvaluationReport(0.0, 0.0, 0.0, cov, len(clusters), int(sizes.max()))

    # cluster x label intersection counts via a sparse membership product
    def incidence(sets):
        rows = np.repeat(np.arange(len(sets)), [len(s) for s in sets])
        cols = np.concatenate(sets)
        return sp.csr_matrix((np.ones(len(cols)), (rows, cols)), shape=(len(sets), n))

    ci, li = incidence(clusters), incidence(labels)
    hit = (ci @ li.T).tocoo()
    lsizes = np.array([len(l) for l in labels], dtype=np.float64)
    best_p = np.zeros(len(clusters))
    best_r = np.zeros(len(clusters))
    best_f = np.zeros(len(clusters))
    p = hit.data / sizes[hit.row]
    r = hit.data / lsizes[hit.col]
    f = 2 * p * r / (p + r)
    np.maximum.at(best_p, hit.row, p)
    np.maximum.at(best_r, hit.row, r)
    np.maximum.at(best_f, hit.row, f)
    total = sizes.sum()
    return EvaluationReport(float(sizes @ best_p / total), float(sizes @ best_r / total),
                            float(sizes @ best_f / total), cov, len(clusters), int(sizes.max()))
