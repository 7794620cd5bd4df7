"""Deterministic DBSCAN and Lloyd k-means baselines.

These only produce labelings to score; they are not tuned for speed. Both
work in O(n) extra memory: neighborhoods are recomputed row by row instead
of being stored.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from ..config import settings
from ..errors import ParameterError
from ..models import NOISE_LABEL, Clustering, DbscanParams, KMeansParams, PointSet

logger = logging.getLogger(__name__)


def _neighbor_counts(ps: PointSet, eps: float) -> NDArray[np.int64]:
    counts = np.empty(ps.n, dtype=np.int64)
    for start in range(0, ps.n, settings.row_block_size):
        stop = min(start + settings.row_block_size, ps.n)
        counts[start:stop] = (cdist(ps.points[start:stop], ps.points) <= eps).sum(axis=1)
    return counts


def dbscan(ps: PointSet, p: DbscanParams) -> Clustering:
    """Classic DBSCAN with a fixed ascending scan order.

    A point is core when at least ``min_pts`` points, itself included, lie
    within ``eps``. Border points join the first cluster that reaches them,
    which under the ascending scan is the lowest cluster id adjacent to them.
    """
    core = _neighbor_counts(ps, p.eps) >= p.min_pts
    labels = np.full(ps.n, NOISE_LABEL, dtype=np.int64)
    cluster = 0
    for seed in range(ps.n):
        if labels[seed] != NOISE_LABEL or not core[seed]:
            continue
        labels[seed] = cluster
        frontier = deque([seed])
        while frontier:
            q = frontier.popleft()
            row = cdist(ps.points[q : q + 1], ps.points)[0]
            reached = np.flatnonzero((row <= p.eps) & (labels == NOISE_LABEL))
            labels[reached] = cluster
            frontier.extend(reached[core[reached]].tolist())
        cluster += 1
    logger.debug(
        f"DBSCAN eps={p.eps:.6g} min_pts={p.min_pts}: {cluster} clusters, "
        f"{int((labels == NOISE_LABEL).sum())} noise"
    )
    return Clustering(labels)


@dataclass(frozen=True)
class KMeansResult:
    """Final labeling, centers and the objective after every assignment step."""

    labels: Clustering
    centers: NDArray[np.float64]
    inertia_history: list[float]

    @property
    def inertia(self) -> float:
        return self.inertia_history[-1]

    @property
    def iterations(self) -> int:
        return len(self.inertia_history) - 1


def _assign(
    points: NDArray[np.float64], centers: NDArray[np.float64]
) -> tuple[NDArray[np.intp], NDArray[np.float64]]:
    d2 = cdist(points, centers, "sqeuclidean")
    assign = np.argmin(d2, axis=1)
    return assign, d2[np.arange(points.shape[0]), assign]


def _reseed_empty(
    points: NDArray[np.float64],
    centers: NDArray[np.float64],
    assign: NDArray[np.intp],
    d2: NDArray[np.float64],
) -> None:
    """Move the farthest point of a multi-point cluster into each empty cluster, in place."""
    k = centers.shape[0]
    counts = np.bincount(assign, minlength=k)
    for empty in np.flatnonzero(counts == 0).tolist():
        movable = counts[assign] > 1
        far = int(np.argmax(np.where(movable, d2, -1.0)))
        counts[assign[far]] -= 1
        assign[far] = empty
        counts[empty] = 1
        d2[far] = 0.0
        centers[empty] = points[far]
        logger.debug(f"k-means: reseeded empty cluster {empty} with point {far}")


def _means(points: NDArray[np.float64], assign: NDArray[np.intp], k: int) -> NDArray[np.float64]:
    sums = np.zeros((k, points.shape[1]), dtype=np.float64)
    np.add.at(sums, assign, points)
    return sums / np.bincount(assign, minlength=k)[:, None]


def kmeans_fit(ps: PointSet, p: KMeansParams) -> KMeansResult:
    """Lloyd iterations from k distinct random points.

    Stops once no center moves more than ``tolerance`` or after ``max_iters``.
    """
    if p.k > ps.n:
        raise ParameterError(f"k={p.k} violates k <= n for n={ps.n} points")
    points = ps.points
    rng = np.random.default_rng(p.seed)
    centers = points[np.sort(rng.choice(ps.n, size=p.k, replace=False))].copy()

    history: list[float] = []
    for _ in range(p.max_iters):
        assign, d2 = _assign(points, centers)
        _reseed_empty(points, centers, assign, d2)
        history.append(math.fsum(d2.tolist()))
        updated = _means(points, assign, p.k)
        shift = float(np.linalg.norm(updated - centers, axis=1).max())
        centers = updated
        if shift <= p.tolerance:
            break

    assign, d2 = _assign(points, centers)
    _reseed_empty(points, centers, assign, d2)
    history.append(math.fsum(d2.tolist()))
    logger.debug(f"k-means k={p.k}: {len(history) - 1} iterations, inertia={history[-1]:.6g}")
    return KMeansResult(
        labels=Clustering(assign.astype(np.int64)), centers=centers, inertia_history=history
    )


def kmeans(ps: PointSet, p: KMeansParams) -> Clustering:
    """k-means labels; never emits noise."""
    return kmeans_fit(ps, p).labels
