"""Adjusted Rand Index and Pearson correlation for internal-vs-external studies."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import pearsonr

from ..errors import InputError, UndefinedCorrelationError
from ..models import Clustering


@dataclass(frozen=True)
class ContingencyTable:
    """Co-occurrence counts n_ij of two labelings with marginals."""

    counts: NDArray[np.int64]

    @property
    def row_sums(self) -> NDArray[np.int64]:
        return self.counts.sum(axis=1)

    @property
    def column_sums(self) -> NDArray[np.int64]:
        return self.counts.sum(axis=0)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def noise_to_singletons(c: Clustering) -> Clustering:
    """Give every noise point its own fresh cluster id above the existing ones."""
    if c.noise.size == 0:
        return c
    labels = c.labels.copy()
    start = int(c.cluster_ids.max()) + 1 if c.k else 0
    labels[c.noise] = np.arange(start, start + c.noise.size)
    return Clustering(labels)


def contingency_table(a: Clustering, b: Clustering) -> ContingencyTable:
    if a.n != b.n:
        raise InputError(f"labelings cover {a.n} and {b.n} points")
    _, rows = np.unique(a.labels, return_inverse=True)
    _, cols = np.unique(b.labels, return_inverse=True)
    n_rows = int(rows.max()) + 1 if rows.size else 0
    n_cols = int(cols.max()) + 1 if cols.size else 0
    flat = np.bincount(rows * n_cols + cols, minlength=n_rows * n_cols)
    return ContingencyTable(counts=flat.reshape(n_rows, n_cols).astype(np.int64))


def _pairs(values: NDArray[np.int64]) -> int:
    # exact integer pair counts
    return sum(int(v) * (int(v) - 1) // 2 for v in values.ravel())


def _one_to_one(table: ContingencyTable) -> bool:
    nonzero = table.counts > 0
    return bool((nonzero.sum(axis=1) == 1).all() and (nonzero.sum(axis=0) == 1).all())


def ari(a: Clustering, b: Clustering) -> float:
    """Adjusted Rand Index in the permutation-model (Hubert-Arabie) form.

    Noise labels must already have been converted with
    ``noise_to_singletons``; remaining -1 labels would be read as one
    cluster. When the index cannot be adjusted (expected equals maximum),
    identical partitions score 1 and anything else 0.
    """
    table = contingency_table(a, b)
    index = _pairs(table.counts)
    sum_a = _pairs(table.row_sums)
    sum_b = _pairs(table.column_sums)
    total = table.total * (table.total - 1) // 2
    if total == 0:
        return 1.0
    expected = sum_a * sum_b / total
    maximum = (sum_a + sum_b) / 2
    if maximum == expected:
        return 1.0 if _one_to_one(table) else 0.0
    return float((index - expected) / (maximum - expected))


def ari_with_noise(a: Clustering, b: Clustering) -> float:
    """ARI after turning noise points into singleton clusters on both sides."""
    return ari(noise_to_singletons(a), noise_to_singletons(b))


def pearson(xs: ArrayLike, ys: ArrayLike) -> float:
    """Sample Pearson correlation coefficient."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise InputError(f"pearson needs two equal-length vectors, got {x.shape} and {y.shape}")
    if x.size < 2:
        raise InputError("pearson needs at least two pairs")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("correlation is undefined for a constant series")
    r = float(pearsonr(x, y).statistic)
    return max(-1.0, min(1.0, r))
