"""Pointwise DISCO scores and the aggregate index.

Every ratio has the form (a - b) / max(a, b) with a, b >= 0, so each term is
in [-1, 1]; 0/0 is defined as 0. Sums go through ``math.fsum``, which is
exactly rounded and therefore independent of point order.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd
from joblib import Parallel, delayed
from numpy.typing import ArrayLike, NDArray

from ..config import settings
from ..errors import ContractError, ParameterError
from ..models import (
    NOISE_LABEL,
    Clustering,
    ClusterStats,
    CoreDistances,
    PointKind,
    PointScore,
    PointSet,
    ScoreReport,
)
from .dc_core import DcDistIndex, DensityGraph, build_density_graph, check_mu

logger = logging.getLogger(__name__)

DEFAULT_MU = 5


def ratio(a: ArrayLike, b: ArrayLike) -> NDArray[np.float64]:
    """(a - b) / max(a, b) elementwise, with 0/0 -> 0."""
    a_arr = np.asarray(a, dtype=np.float64)
    b_arr = np.asarray(b, dtype=np.float64)
    denom = np.maximum(a_arr, b_arr)
    out = np.zeros(np.broadcast(a_arr, b_arr).shape, dtype=np.float64)
    np.divide(a_arr - b_arr, denom, out=out, where=denom > 0)
    return out


def cluster_stats(c: Clustering, cd: CoreDistances) -> ClusterStats:
    """kappa_max and size of every cluster."""
    kappa_max = np.array([cd.kappa[members].max() for members in c.clusters], dtype=np.float64)
    return ClusterStats(kappa_max=kappa_max, size=np.asarray(c.sizes, dtype=np.int64))


def mean_dc_to_cluster(row: NDArray[np.float64], cluster: ArrayLike) -> float:
    """Mean of a dc-dist row over a cluster's members.

    If the row's source is a member, its own zero entry is part of the mean.
    """
    members = np.asarray(cluster, dtype=np.intp)
    if members.size == 0:
        raise ContractError("mean dc-dist to an empty cluster is undefined")
    return math.fsum(row[members].tolist()) / members.size


@dataclass(frozen=True)
class _Groups:
    """Clustered points ordered by cluster, for per-cluster reductions of a row."""

    order: NDArray[np.intp]
    starts: NDArray[np.intp]
    sizes: NDArray[np.int64]

    @classmethod
    def of(cls, c: Clustering) -> _Groups:
        if c.k == 0:
            empty = np.empty(0, dtype=np.intp)
            return cls(order=empty, starts=empty, sizes=np.empty(0, dtype=np.int64))
        order = np.concatenate(c.clusters).astype(np.intp)
        starts = np.concatenate([[0], np.cumsum(c.sizes)[:-1]]).astype(np.intp)
        return cls(order=order, starts=starts, sizes=np.asarray(c.sizes, dtype=np.int64))

    def means(self, row: NDArray[np.float64]) -> NDArray[np.float64]:
        values = row[self.order].tolist()
        sums = [
            math.fsum(values[s : s + int(size)])
            for s, size in zip(self.starts.tolist(), self.sizes.tolist(), strict=True)
        ]
        return np.asarray(sums, dtype=np.float64) / self.sizes

    def minima(self, row: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.minimum.reduceat(row[self.order], self.starts)


def _cluster_point(
    x: int, row: NDArray[np.float64], c: Clustering, groups: _Groups
) -> tuple[float, float, float, int]:
    """rho_cluster terms for k >= 2: (value, own mean, other mean, other cluster)."""
    means = groups.means(row)
    own = int(c.cluster_index[x])
    others = np.flatnonzero(np.arange(c.k) != own)
    terms = ratio(means[others], means[own])
    best = int(np.argmin(terms))
    return float(terms[best]), float(means[own]), float(means[others[best]]), int(others[best])


def _noise_point(
    x: int,
    row: NDArray[np.float64],
    cd: CoreDistances,
    stats: ClusterStats,
    groups: _Groups,
) -> tuple[float, float, int, int]:
    """rho_sparse and rho_far with their minimizing clusters."""
    sparse = ratio(cd.kappa[x], stats.kappa_max)
    far = ratio(groups.minima(row), stats.kappa_max)
    s_best = int(np.argmin(sparse))
    f_best = int(np.argmin(far))
    return float(sparse[s_best]), float(far[f_best]), s_best, f_best


def _require_noise(x: int, c: Clustering) -> None:
    if not c.is_noise(x):
        raise ContractError(f"point {x} is labeled {c.labels[x]}, not noise")
    if c.k < 1:
        raise ContractError("noise scores need at least one cluster")


def rho_cluster(x: int, c: Clustering, idx: DcDistIndex) -> float:
    """Silhouette-style score of a cluster point under dc-dist (k >= 2)."""
    if c.is_noise(x):
        raise ContractError(f"point {x} is noise; rho_cluster needs a cluster point")
    if c.k < 2:
        raise ContractError(f"rho_cluster needs at least two clusters, got k={c.k}")
    return _cluster_point(x, idx.row(x), c, _Groups.of(c))[0]


def rho_sparse(x: int, c: Clustering, cd: CoreDistances, stats: ClusterStats) -> float:
    """How much sparser a noise point is than the loosest cluster."""
    _require_noise(x, c)
    return float(ratio(cd.kappa[x], stats.kappa_max).min())


def rho_far(x: int, c: Clustering, idx: DcDistIndex, stats: ClusterStats) -> float:
    """How far a noise point is from being density-connected to any cluster."""
    _require_noise(x, c)
    minima = _Groups.of(c).minima(idx.row(x))
    return float(ratio(minima, stats.kappa_max).min())


def rho_noise(
    x: int, c: Clustering, cd: CoreDistances, idx: DcDistIndex, stats: ClusterStats
) -> float:
    """min(rho_sparse, rho_far)."""
    return min(rho_sparse(x, c, cd, stats), rho_far(x, c, idx, stats))


def rho_cluster_vs_noise(x: int, c: Clustering, idx: DcDistIndex) -> float:
    """Score of a point in the only cluster, compared against the closest noise."""
    if c.k != 1 or c.noise.size == 0 or c.is_noise(x):
        raise ContractError(
            "rho_cluster_vs_noise needs exactly one cluster, some noise and a cluster point"
        )
    row = idx.row(x)
    own = mean_dc_to_cluster(row, c.clusters[0])
    nearest_noise = float(row[c.noise].min())
    return float(ratio(nearest_noise, own))


class _Scorer:
    """Dispatches every point to its rule; shares the graph across points."""

    def __init__(self, graph: DensityGraph | None, c: Clustering):
        self.graph = graph
        self.c = c
        self.groups = _Groups.of(c)
        self.stats = cluster_stats(c, graph.core) if graph is not None and c.k else None
        self.has_noise = bool(c.noise.size)

    def _row(self, x: int) -> NDArray[np.float64]:
        assert self.graph is not None
        return self.graph.index.row(x)

    def point(self, x: int) -> PointScore:
        c = self.c
        label = int(c.labels[x])
        if label == NOISE_LABEL:
            if c.k == 0:
                return PointScore(
                    index=x, label=label, kind=PointKind.ALL_NOISE_MINUS_ONE, value=-1.0
                )
            assert self.graph is not None and self.stats is not None
            sparse, far, s_c, f_c = _noise_point(
                x, self._row(x), self.graph.core, self.stats, self.groups
            )
            return PointScore(
                index=x,
                label=label,
                kind=PointKind.NOISE,
                value=min(sparse, far),
                rho_sparse=sparse,
                rho_far=far,
                sparse_cluster=int(c.cluster_ids[s_c]),
                far_cluster=int(c.cluster_ids[f_c]),
            )
        if c.sizes[c.cluster_index[x]] == 1:
            return PointScore(index=x, label=label, kind=PointKind.SINGLETON_ZERO, value=0.0)
        if c.k == 1 and not self.has_noise:
            return PointScore(index=x, label=label, kind=PointKind.ONE_CLUSTER_ZERO, value=0.0)
        row = self._row(x)
        if c.k == 1:
            own = mean_dc_to_cluster(row, c.clusters[0])
            nearest_noise = float(row[c.noise].min())
            return PointScore(
                index=x,
                label=label,
                kind=PointKind.ONE_CLUSTER_VS_NOISE,
                value=float(ratio(nearest_noise, own)),
                own_mean=own,
                other_mean=nearest_noise,
            )
        value, own, other, other_c = _cluster_point(x, row, c, self.groups)
        return PointScore(
            index=x,
            label=label,
            kind=PointKind.CLUSTER,
            value=value,
            own_mean=own,
            other_mean=other,
            nearest_cluster=int(c.cluster_ids[other_c]),
        )


def _needs_graph(c: Clustering) -> bool:
    return not (c.k == 0 or (c.k == 1 and c.noise.size == 0))


def _resolve_graph(ps: PointSet, mu: int, graph: DensityGraph | None) -> DensityGraph:
    if graph is None:
        return build_density_graph(ps, mu)
    if graph.mu != mu or graph.n != ps.n:
        raise ParameterError(
            f"prebuilt density graph has mu={graph.mu}, n={graph.n}; requested mu={mu}, n={ps.n}"
        )
    return graph


def _mean(values: list[float]) -> float:
    return max(-1.0, min(1.0, math.fsum(values) / len(values)))


def score(
    ps: PointSet,
    c: Clustering,
    mu: int = DEFAULT_MU,
    graph: DensityGraph | None = None,
    threads: int | None = None,
) -> ScoreReport:
    """DISCO value of a clustering with every point's score.

    Args:
        ps: the points
        c: labels for the points, -1 marking noise
        mu: neighborhood size for core-distances
        graph: a prebuilt density graph over ``ps`` with the same mu
        threads: worker count; defaults to ``settings.worker_count()``

    Returns:
        ScoreReport whose ``disco`` is the mean of the pointwise values
    """
    c.check_size(ps.n)
    check_mu(ps.n, mu)
    resolved = _resolve_graph(ps, mu, graph) if _needs_graph(c) else graph
    scorer = _Scorer(resolved, c)

    workers = threads or settings.worker_count()
    if workers > 1 and ps.n > 1:
        point_scores = Parallel(n_jobs=workers, prefer="threads")(
            delayed(scorer.point)(x) for x in range(ps.n)
        )
    else:
        point_scores = [scorer.point(x) for x in range(ps.n)]

    noise_scores = [p for p in point_scores if p.kind == PointKind.NOISE]
    sparse = [p.rho_sparse or 0.0 for p in noise_scores]
    far = [p.rho_far or 0.0 for p in noise_scores]
    report = ScoreReport(
        disco=_mean([p.value for p in point_scores]),
        mu=mu,
        n_clusters=c.k,
        n_noise=int(c.noise.size),
        point_scores=point_scores,
        mean_rho_sparse=_mean(sparse) if sparse else None,
        mean_rho_far=_mean(far) if far else None,
    )
    logger.info(f"Scored n={ps.n} k={c.k} noise={report.n_noise} mu={mu}: disco={report.disco:.6f}")
    return report


POINTWISE_COLUMNS = [
    "index",
    "label",
    "kind",
    "value",
    "own_mean",
    "other_mean",
    "nearest_cluster",
    "rho_sparse",
    "rho_far",
    "sparse_cluster",
    "far_cluster",
]


def pointwise_report(report: ScoreReport) -> pd.DataFrame:
    """One row per point with its rule, value and explaining terms."""
    frame = pd.DataFrame(
        [p.model_dump(mode="json") for p in report.point_scores], columns=POINTWISE_COLUMNS
    )
    for column in ("nearest_cluster", "sparse_cluster", "far_cluster"):
        frame[column] = frame[column].astype("Int64")
    return frame


def noise_probe(
    ps: PointSet,
    c: Clustering,
    mu: int = DEFAULT_MU,
    graph: DensityGraph | None = None,
) -> pd.DataFrame:
    """rho_noise each cluster point would get if it alone were labeled noise.

    Correctly labeled noise should outscore these values. A point whose
    relabeling leaves no cluster gets -1, the all-noise rule.
    """
    c.check_size(ps.n)
    check_mu(ps.n, mu)
    graph = _resolve_graph(ps, mu, graph)
    records: list[dict[str, float | int]] = []
    for x in np.flatnonzero(c.labels != NOISE_LABEL).tolist():
        labels = c.labels.copy()
        labels[x] = NOISE_LABEL
        probe = Clustering(labels)
        if probe.k == 0:
            value = -1.0
        else:
            stats = cluster_stats(probe, graph.core)
            sparse, far, _, _ = _noise_point(
                x, graph.index.row(x), graph.core, stats, _Groups.of(probe)
            )
            value = min(sparse, far)
        records.append({"index": x, "label": int(c.labels[x]), "rho_noise": value})
    return pd.DataFrame.from_records(records, columns=["index", "label", "rho_noise"])
