"""Seeded synthetic datasets.

Every generator is a pure function of its GeneratorSpec: randomness comes
from ``numpy.random.default_rng(spec.seed)`` (PCG64), so the same spec gives
the same bytes on every platform. Clusters are emitted in label order and
background noise (label -1) comes last.
"""

from __future__ import annotations

import json
import logging
import math
from collections.abc import Callable, Mapping
from pathlib import Path

import numpy as np
from numpy.typing import NDArray
from pydantic import ValidationError
from scipy.spatial.distance import cdist

from ..errors import DataNotFoundError, ParameterError
from ..models import (
    NOISE_LABEL,
    Clustering,
    GeneratorKind,
    GeneratorSpec,
    NoiseDistribution,
    PointSet,
)

logger = logging.getLogger(__name__)

POISSON_LAMBDA = 5.0
NOISE_PADDING = 0.1
MAX_NOISE_ROUNDS = 100

Dataset = tuple[PointSet, Clustering]


def _assemble(
    clusters: list[NDArray[np.float64]], noise: NDArray[np.float64] | None = None
) -> Dataset:
    parts = list(clusters)
    labels = [np.full(len(part), label, dtype=np.int64) for label, part in enumerate(clusters)]
    if noise is not None and len(noise):
        parts.append(noise)
        labels.append(np.full(len(noise), NOISE_LABEL, dtype=np.int64))
    return PointSet(np.vstack(parts)), Clustering(np.concatenate(labels))


def _draw_noise(
    rng: np.random.Generator,
    reference: NDArray[np.float64],
    count: int,
    distribution: NoiseDistribution,
    padding: float,
) -> NDArray[np.float64]:
    dim = reference.shape[1]
    if distribution == NoiseDistribution.UNIFORM:
        lo = reference.min(axis=0)
        hi = reference.max(axis=0)
        pad = np.where(hi > lo, (hi - lo) * padding, 1.0)
        return rng.uniform(lo - pad, hi + pad, size=(count, dim))
    if distribution == NoiseDistribution.GAUSSIAN:
        std = reference.std(axis=0)
        return rng.normal(reference.mean(axis=0), np.where(std > 0, std, 1.0), size=(count, dim))
    counts = rng.poisson(POISSON_LAMBDA, size=(count, dim)).astype(np.float64)
    return counts - POISSON_LAMBDA + reference.mean(axis=0)


def background_noise(
    rng: np.random.Generator,
    reference: NDArray[np.float64],
    count: int,
    distribution: NoiseDistribution = NoiseDistribution.UNIFORM,
    padding: float = NOISE_PADDING,
    clearance: float = 0.0,
) -> NDArray[np.float64]:
    """Draw ``count`` noise points shaped after the reference (cluster) points.

    ``padding`` widens the uniform box by that fraction of the cluster extent
    on every side. Draws closer than ``clearance`` to a reference point are
    rejected and redrawn.
    """
    kept = np.empty((0, reference.shape[1]), dtype=np.float64)
    for _ in range(MAX_NOISE_ROUNDS):
        missing = count - len(kept)
        if missing == 0:
            return kept
        draws = _draw_noise(rng, reference, missing, distribution, padding)
        if clearance > 0:
            draws = draws[cdist(draws, reference).min(axis=1) >= clearance]
        kept = np.vstack([kept, draws])
    if len(kept) < count:
        raise ParameterError(
            f"placed only {len(kept)} of {count} noise points at clearance {clearance}"
        )
    return kept


def _spec_noise(
    rng: np.random.Generator, reference: NDArray[np.float64], spec: GeneratorSpec
) -> NDArray[np.float64]:
    return background_noise(
        rng,
        reference,
        spec.noise_points,
        spec.noise_distribution,
        padding=spec.noise_padding,
        clearance=spec.noise_clearance,
    )


def _require_plane(spec: GeneratorSpec) -> None:
    if spec.dim != 2:
        raise ParameterError(
            f"{spec.kind.value} generates planar data; dim must be 2, got {spec.dim}"
        )


def _ring_layout(spec: GeneratorSpec) -> tuple[list[float], list[tuple[float, float]]]:
    radii = spec.ring_radii or [float(i + 1) for i in range(spec.n_clusters)]
    if len(radii) != spec.n_clusters:
        raise ParameterError(f"{len(radii)} ring radii given for {spec.n_clusters} rings")
    centers = spec.ring_centers or [(0.0, 0.0)]
    if len(centers) == 1:
        centers = centers * spec.n_clusters
    if len(centers) != spec.n_clusters:
        raise ParameterError(f"{len(centers)} ring centers given for {spec.n_clusters} rings")
    half = spec.ring_width / 2
    for i, r in enumerate(radii):
        if r - half < 0:
            raise ParameterError(f"ring {i}: radius {r} is smaller than half the width {half}")
    return radii, centers


def check_rings_disjoint(spec: GeneratorSpec) -> None:
    """Raise ParameterError if any two annuli of a GeneratorSpec share area."""
    radii, centers = _ring_layout(spec)
    half = spec.ring_width / 2
    for i in range(len(radii)):
        for j in range(i + 1, len(radii)):
            gap = math.dist(centers[i], centers[j])
            # distances from center i reached by annulus j form one interval
            lo = max(0.0, gap - (radii[j] + half), (radii[j] - half) - gap)
            hi = gap + radii[j] + half
            if lo < radii[i] + half and hi > radii[i] - half:
                raise ParameterError(f"rings {i} and {j} overlap")


def gen_rings_with_noise(spec: GeneratorSpec) -> Dataset:
    """Annuli plus background noise.

    Each ring point gets its own equal angular sector (uniform within it) and a
    uniform offset across the band, so no stretch of a ring is left empty.
    """
    _require_plane(spec)
    check_rings_disjoint(spec)
    radii, centers = _ring_layout(spec)
    rng = np.random.default_rng(spec.seed)
    half = spec.ring_width / 2
    count = spec.points_per_cluster
    rings = []
    for r, (cx, cy) in zip(radii, centers, strict=True):
        angle = 2 * np.pi * (np.arange(count) + rng.uniform(0.0, 1.0, count)) / count
        radius = rng.uniform(r - half, r + half, count)
        rings.append(np.column_stack([cx + radius * np.cos(angle), cy + radius * np.sin(angle)]))
    noise = _spec_noise(rng, np.vstack(rings), spec)
    return _assemble(rings, noise)


def gen_two_moons(spec: GeneratorSpec) -> Dataset:
    """Two interleaved unit half-circles; ``jitter`` is the Gaussian std in radius units."""
    _require_plane(spec)
    rng = np.random.default_rng(spec.seed)
    t = np.linspace(0.0, np.pi, spec.points_per_cluster)
    upper = np.column_stack([np.cos(t), np.sin(t)])
    lower = np.column_stack([1.0 - np.cos(t), 0.5 - np.sin(t)])
    if spec.jitter > 0:
        upper = upper + rng.normal(0.0, spec.jitter, upper.shape)
        lower = lower + rng.normal(0.0, spec.jitter, lower.shape)
    moons = [upper, lower]
    noise = _spec_noise(rng, np.vstack(moons), spec)
    return _assemble(moons, noise)


def uniform_ball(
    rng: np.random.Generator, center: NDArray[np.float64], radius: float, count: int
) -> NDArray[np.float64]:
    """``count`` points of uniform density inside a ball."""
    direction = rng.normal(size=(count, center.shape[0]))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    scale = radius * rng.uniform(0.0, 1.0, count) ** (1.0 / center.shape[0])
    return center + direction * scale[:, None]


def gen_uniform_balls(spec: GeneratorSpec) -> Dataset:
    """Balls of uniform density along the first axis, ``center_distance`` apart.

    With ``probe_distance`` set, one extra noise point sits that far from the
    first ball's center, on the side facing away from the other balls.
    """
    rng = np.random.default_rng(spec.seed)
    centers = np.zeros((spec.n_clusters, spec.dim), dtype=np.float64)
    centers[:, 0] = np.arange(spec.n_clusters) * spec.center_distance
    balls = [uniform_ball(rng, center, spec.radius, spec.points_per_cluster) for center in centers]
    noise = _spec_noise(rng, np.vstack(balls), spec)
    if spec.probe_distance is not None:
        probe = centers[0].copy()
        probe[0] -= spec.probe_distance
        noise = np.vstack([noise, probe[None, :]])
    return _assemble(balls, noise)


def blob_centers(n_clusters: int, dim: int, spacing: float) -> NDArray[np.float64]:
    """Centers on a square grid in the first two axes, ``spacing`` apart."""
    centers = np.zeros((n_clusters, dim), dtype=np.float64)
    if dim == 1:
        centers[:, 0] = np.arange(n_clusters) * spacing
        return centers
    side = math.ceil(math.sqrt(n_clusters))
    ids = np.arange(n_clusters)
    centers[:, 0] = (ids % side) * spacing
    centers[:, 1] = (ids // side) * spacing
    return centers


def gen_blobs(spec: GeneratorSpec) -> Dataset:
    """Isotropic Gaussian blobs on a grid."""
    rng = np.random.default_rng(spec.seed)
    blobs = [
        rng.normal(center, spec.cluster_std, size=(spec.points_per_cluster, spec.dim))
        for center in blob_centers(spec.n_clusters, spec.dim, spec.spacing)
    ]
    noise = _spec_noise(rng, np.vstack(blobs), spec)
    return _assemble(blobs, noise)


def gen_chain_ramp(spec: GeneratorSpec) -> Dataset:
    """Points on a line whose gaps grow linearly from ``gap_start`` to ``gap_end``.

    The first ``cluster_fraction`` of the chain (the dense end) is cluster 0,
    the sparse tail is noise.
    """
    gaps = np.linspace(spec.gap_start, spec.gap_end, spec.n_points - 1)
    chain = np.zeros((spec.n_points, spec.dim), dtype=np.float64)
    chain[1:, 0] = np.cumsum(gaps)
    n_cluster = max(1, round(spec.cluster_fraction * spec.n_points))
    rng = np.random.default_rng(spec.seed)
    noise = _spec_noise(rng, chain[:n_cluster], spec)
    return _assemble([chain[:n_cluster]], np.vstack([chain[n_cluster:], noise]))


GENERATORS: dict[GeneratorKind, Callable[[GeneratorSpec], Dataset]] = {
    GeneratorKind.RINGS_WITH_NOISE: gen_rings_with_noise,
    GeneratorKind.TWO_MOONS: gen_two_moons,
    GeneratorKind.UNIFORM_BALLS: gen_uniform_balls,
    GeneratorKind.CHAIN_RAMP: gen_chain_ramp,
    GeneratorKind.BLOBS: gen_blobs,
}


def generate(spec: GeneratorSpec) -> Dataset:
    ps, labels = GENERATORS[spec.kind](spec)
    logger.debug(
        f"Generated {spec.kind.value} (seed={spec.seed}): n={ps.n}, k={labels.k}, "
        f"noise={labels.noise.size}"
    )
    return ps, labels


def _parse_value(raw: str) -> object:
    raw = raw.strip()
    if raw[:1] in "[{":
        try:
            return json.loads(raw)
        except json.JSONDecodeError as e:
            raise ParameterError(f"Cannot parse generator value {raw!r}: {e}") from e
    return raw


def parse_key_values(lines: list[str]) -> dict[str, str]:
    """``key=value`` lines; blank lines and ``#`` comments are skipped."""
    pairs: dict[str, str] = {}
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        key, sep, value = text.partition("=")
        if not sep or not key.strip():
            raise ParameterError(f"line {number}: expected key=value, got {line.strip()!r}")
        pairs[key.strip()] = value.strip()
    return pairs


def read_gen_config(path: Path | str) -> dict[str, str]:
    path = Path(path)
    if not path.exists():
        raise DataNotFoundError(f"Generator config not found: {path}")
    return parse_key_values(path.read_text(encoding="utf-8").splitlines())


def spec_from_params(
    kind: GeneratorKind | str, seed: int, params: Mapping[str, str]
) -> GeneratorSpec:
    """Build a GeneratorSpec from string parameters (CLI flags or a config file).

    List-valued fields take JSON, e.g. ``ring_radii=[1, 2.5, 4]``.
    """
    fields: dict[str, object] = {key: _parse_value(value) for key, value in params.items()}
    unknown = sorted(set(fields) - set(GeneratorSpec.model_fields))
    if unknown:
        raise ParameterError(f"Unknown generator parameters: {', '.join(unknown)}")
    fields.setdefault("seed", seed)
    fields["kind"] = kind
    try:
        return GeneratorSpec.model_validate(fields)
    except ValidationError as e:
        raise ParameterError(f"Invalid generator parameters: {e}") from e
