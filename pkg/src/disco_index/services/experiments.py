"""Parameter sweeps, ablation ramps and internal-vs-external correlation runs.

Settings run in a thread pool; rows always come back in parameter order, so
results do not depend on the worker count.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from typing import Any, TypeVar

import numpy as np
from joblib import Parallel, delayed
from pydantic import BaseModel, ValidationError

from ..config import settings
from ..errors import ParameterError, UndefinedCorrelationError
from ..models import (
    NOISE_LABEL,
    AblationResult,
    AblationRow,
    Clustering,
    CorrelationResult,
    CorrelationRow,
    DbscanParams,
    GeneratorKind,
    GeneratorSpec,
    KMeansParams,
    PerturbOp,
    PointSet,
    RampKind,
    StandardizeMode,
    SweepParameter,
    SweepResult,
    SweepRow,
)
from .clusterers import dbscan, kmeans
from .datasets import perturb_labels, random_labeling, z_standardize
from .dc_core import DensityGraph, build_density_graph
from .disco import DEFAULT_MU, score
from .external_eval import ari_with_noise, pearson
from .generators import Dataset, generate, uniform_ball

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")
M = TypeVar("M", bound=BaseModel)

DEFAULT_MIN_PTS = 5
EPS_QUANTILES = (0.5, 0.7, 0.8, 0.9, 0.95, 0.99)

DEFAULT_RAMP_SPECS: dict[RampKind, GeneratorSpec] = {
    RampKind.SWAP: GeneratorSpec(
        kind=GeneratorKind.TWO_MOONS, seed=0, points_per_cluster=100, jitter=0.05
    ),
    RampKind.SEPARATION: GeneratorSpec(
        kind=GeneratorKind.UNIFORM_BALLS, seed=0, n_clusters=2, points_per_cluster=100
    ),
    RampKind.JITTER: GeneratorSpec(kind=GeneratorKind.TWO_MOONS, seed=0, points_per_cluster=100),
    RampKind.NOISE_DENSITY: GeneratorSpec(
        kind=GeneratorKind.UNIFORM_BALLS, seed=0, n_clusters=1, points_per_cluster=200
    ),
    RampKind.NOISE_DISTANCE: GeneratorSpec(
        kind=GeneratorKind.UNIFORM_BALLS, seed=0, n_clusters=1, points_per_cluster=200
    ),
    RampKind.MU: GeneratorSpec(
        kind=GeneratorKind.BLOBS, seed=0, n_clusters=2, points_per_cluster=100
    ),
}

DEFAULT_RAMP_VALUES: dict[RampKind, list[float]] = {
    RampKind.SWAP: [round(0.02 * i, 2) for i in range(16)],
    RampKind.SEPARATION: [0.0, 1.0, 2.0, 3.0, 4.0, 4.5, 6.0, 8.0, 12.0, 20.0],
    RampKind.JITTER: [round(0.02 * i, 2) for i in range(11)],
    RampKind.NOISE_DENSITY: [5, 10, 15, 20, 30, 45, 60, 90],
    RampKind.NOISE_DISTANCE: [0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0],
    RampKind.MU: [float(mu) for mu in range(1, 11)],
}


def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int | None = None) -> list[R]:
    """``[fn(x) for x in items]``, spread over a thread pool."""
    workers = min(threads or settings.worker_count(), len(items))
    if workers <= 1:
        return [fn(x) for x in items]
    results: list[R] = Parallel(n_jobs=workers, prefer="threads")(delayed(fn)(x) for x in items)
    return results


def validated(model: type[M], **fields: Any) -> M:
    """Build a parameter model, reporting constraint violations as ParameterError."""
    try:
        return model.model_validate(fields)
    except ValidationError as e:
        raise ParameterError(f"Invalid {model.__name__}: {e}") from e


def _as_int(value: float, what: str) -> int:
    if value != int(value):
        raise ParameterError(f"{what} must be an integer, got {value}")
    return int(value)


def _safe_pearson(xs: list[float], ys: list[float]) -> float | None:
    try:
        return pearson(xs, ys)
    except UndefinedCorrelationError as e:
        logger.warning(f"PCC not reported: {e}")
        return None


def run_sweep(
    ps: PointSet,
    parameter: SweepParameter,
    values: Sequence[float],
    mu: int = DEFAULT_MU,
    min_pts: int = DEFAULT_MIN_PTS,
    reference: Clustering | None = None,
    seed: int = 0,
    graph: DensityGraph | None = None,
    threads: int | None = None,
) -> SweepResult:
    """Cluster with DBSCAN (eps) or k-means (k) at every value and score each result.

    The arg-max DISCO row is flagged ``best``; with reference labels every
    row also carries its ARI and the result the PCC of DISCO and ARI.
    """
    if len(values) < 2:
        raise ParameterError(f"a sweep needs at least two settings, got {len(values)}")
    if reference is not None:
        reference.check_size(ps.n)
    ordered = sorted(float(v) for v in values)
    if parameter == SweepParameter.K:
        for v in ordered:
            _as_int(v, "k")
    graph = graph or build_density_graph(ps, mu)

    def run(value: float) -> SweepRow:
        if parameter == SweepParameter.EPS:
            c = dbscan(ps, validated(DbscanParams, eps=value, min_pts=min_pts))
        else:
            c = kmeans(ps, validated(KMeansParams, k=int(value), seed=seed))
        report = score(ps, c, mu=mu, graph=graph, threads=1)
        ari = ari_with_noise(c, reference) if reference is not None else None
        logger.debug(f"sweep {parameter.value}={value:.6g}: k={c.k} disco={report.disco:.6f}")
        return SweepRow(
            value=value, clusters=c.k, noise=report.n_noise, disco=report.disco, ari=ari
        )

    rows = ordered_map(run, ordered, threads)
    best = int(np.argmax([r.disco for r in rows]))
    rows[best] = rows[best].model_copy(update={"best": True})
    pcc = None
    if reference is not None:
        pcc = _safe_pearson([r.disco for r in rows], [r.ari or 0.0 for r in rows])
    return SweepResult(parameter=parameter, rows=rows, pcc=pcc)


def _with(spec: GeneratorSpec, **update: Any) -> GeneratorSpec:
    return validated(GeneratorSpec, **{**spec.model_dump(), **update})


def _noise_group(spec: GeneratorSpec, count: int) -> Dataset:
    """Dataset plus ``count`` noise points packed in a small ball beside cluster 0."""
    ps, c = generate(spec)
    members = ps.points[c.clusters[0]]
    centroid = members.mean(axis=0)
    spread = float(np.linalg.norm(members - centroid, axis=1).max())
    center = centroid.copy()
    center[0] -= 3.0 * spread
    group = uniform_ball(np.random.default_rng([spec.seed, 1]), center, spread / 2, count)
    labels = np.concatenate([c.labels, np.full(count, NOISE_LABEL, dtype=np.int64)])
    return PointSet(np.vstack([ps.points, group])), Clustering(labels)


def _ramp_case(
    ramp: RampKind, spec: GeneratorSpec, base: Dataset | None, value: float, mu: int, seed: int
) -> tuple[PointSet, Clustering, int]:
    if ramp == RampKind.SWAP:
        ps, truth = base or generate(spec)
        return ps, perturb_labels(truth, PerturbOp.SWAP_RANDOM, float(value), seed=seed), mu
    if ramp == RampKind.MU:
        ps, truth = base or generate(spec)
        return ps, truth, _as_int(value, "mu")
    if ramp == RampKind.NOISE_DENSITY:
        ps, c = _noise_group(spec, _as_int(value, "noise group size"))
        return ps, c, mu

    fields = {
        (RampKind.SEPARATION, GeneratorKind.UNIFORM_BALLS): "center_distance",
        (RampKind.SEPARATION, GeneratorKind.BLOBS): "spacing",
        (RampKind.JITTER, GeneratorKind.TWO_MOONS): "jitter",
        (RampKind.NOISE_DISTANCE, GeneratorKind.UNIFORM_BALLS): "probe_distance",
    }
    field = fields.get((ramp, spec.kind))
    if field is None:
        raise ParameterError(f"the {ramp.value} ramp does not apply to {spec.kind.value} data")
    ps, c = generate(_with(spec, **{field: value}))
    return ps, c, mu


def run_ablation(
    ramp: RampKind,
    values: Sequence[float] | None = None,
    mu: int = DEFAULT_MU,
    seed: int = 0,
    spec: GeneratorSpec | None = None,
    base: Dataset | None = None,
    threads: int | None = None,
    standardize: StandardizeMode = StandardizeMode.NONE,
) -> AblationResult:
    """Score one dataset family along a ramp of a single parameter.

    ``spec`` replaces the ramp's default generator; ``base`` supplies fixed
    data and labels for the swap and mu ramps. Rows report DISCO and, when
    there is noise, the mean rho_sparse and rho_far over noise points. Every
    case is standardized with ``standardize`` right before scoring.
    """
    ramp_values = sorted(float(v) for v in (values or DEFAULT_RAMP_VALUES[ramp]))
    if not ramp_values:
        raise ParameterError(f"the {ramp.value} ramp needs at least one value")
    if base is not None and ramp not in (RampKind.SWAP, RampKind.MU):
        raise ParameterError(f"the {ramp.value} ramp generates its own data; drop --data")
    resolved = spec or _with(DEFAULT_RAMP_SPECS[ramp], seed=seed)

    def run(value: float) -> AblationRow:
        ps, c, case_mu = _ramp_case(ramp, resolved, base, value, mu, seed)
        report = score(z_standardize(ps, standardize), c, mu=case_mu, threads=1)
        logger.debug(f"ramp {ramp.value}={value:.6g}: disco={report.disco:.6f}")
        return AblationRow(
            value=value,
            disco=report.disco,
            rho_sparse=report.mean_rho_sparse,
            rho_far=report.mean_rho_far,
            clusters=c.k,
            noise=report.n_noise,
        )

    return AblationResult(ramp=ramp, rows=ordered_map(run, ramp_values, threads))


def default_eps_values(graph: DensityGraph) -> list[float]:
    """DBSCAN radii at upper quantiles of the core-distances."""
    quantiles = np.quantile(graph.core.kappa, EPS_QUANTILES)
    return sorted({float(q) for q in quantiles if q > 0})


def run_correlation(
    ps: PointSet,
    reference: Clustering,
    mu: int = DEFAULT_MU,
    min_pts: int = DEFAULT_MIN_PTS,
    eps_values: Sequence[float] | None = None,
    k_values: Sequence[int] | None = None,
    seed: int = 0,
    graph: DensityGraph | None = None,
    threads: int | None = None,
) -> CorrelationResult:
    """Score a battery of DBSCAN, k-means and random labelings against a reference.

    Each row pairs DISCO with the ARI against ``reference``; ``pcc`` is
    their correlation over the battery.
    """
    reference.check_size(ps.n)
    graph = graph or build_density_graph(ps, mu)
    k_ref = max(reference.k, 2)
    eps_list = list(eps_values) if eps_values is not None else default_eps_values(graph)
    k_list = list(k_values) if k_values is not None else list(range(2, k_ref + 3))

    battery: list[tuple[str, Callable[[], Clustering]]] = []
    for eps in eps_list:
        params = validated(DbscanParams, eps=eps, min_pts=min_pts)
        battery.append((f"dbscan eps={eps:.6g}", lambda p=params: dbscan(ps, p)))
    for k in k_list:
        if k > ps.n:
            continue
        kparams = validated(KMeansParams, k=k, seed=seed)
        battery.append((f"kmeans k={k}", lambda p=kparams: kmeans(ps, p)))
    battery.append(("random", lambda: random_labeling(ps.n, k_ref, 0.0, seed)))
    battery.append(("random+noise", lambda: random_labeling(ps.n, k_ref, 0.1, seed + 1)))

    def run(entry: tuple[str, Callable[[], Clustering]]) -> CorrelationRow:
        name, make = entry
        c = make()
        report = score(ps, c, mu=mu, graph=graph, threads=1)
        logger.debug(f"correlate {name}: disco={report.disco:.6f}")
        return CorrelationRow(
            name=name,
            clusters=c.k,
            noise=report.n_noise,
            disco=report.disco,
            ari=ari_with_noise(c, reference),
        )

    rows = ordered_map(run, battery, threads)
    pcc = _safe_pearson([r.disco for r in rows], [r.ari for r in rows])
    return CorrelationResult(rows=rows, pcc=pcc)
