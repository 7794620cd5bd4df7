"""Pytest configuration and fixtures."""

from pathlib import Path

import numpy as np
import pytest
from typer.testing import CliRunner

from src.disco_index.models import Clustering, GeneratorKind, GeneratorSpec, PointSet
from src.disco_index.services.generators import generate


def line(*xs: float) -> PointSet:
    """Points on the real line."""
    return PointSet(np.asarray(xs, dtype=np.float64).reshape(-1, 1))


@pytest.fixture
def three_groups() -> tuple[PointSet, Clustering]:
    """Dense groups A (label 0) and C (label 2) plus a sparse chain B (label 1).

    Under mu=1 point 0 is dc-nearest to C although B holds the
    Euclidean-nearest foreign point.
    """
    a = [0.0, 0.1, 0.2, 0.3, 0.4]
    b = [-0.5, -1.5, -2.5]
    c = [1.0, 1.1, 1.2, 1.3, 1.4]
    labels = [0] * 5 + [1] * 3 + [2] * 5
    return line(*a, *b, *c), Clustering.from_labels(labels)


@pytest.fixture
def noise_between() -> tuple[PointSet, Clustering]:
    """A noise point at 0 between a dense cluster (label 0) and a sparse one (label 1)."""
    points = line(0.0, 3.0, 3.1, 3.2, 3.3, -3.0, -4.0, -5.0)
    return points, Clustering.from_labels([-1, 0, 0, 0, 0, 1, 1, 1])


@pytest.fixture
def two_blobs() -> tuple[PointSet, Clustering]:
    spec = GeneratorSpec(
        kind=GeneratorKind.BLOBS, seed=7, n_clusters=2, points_per_cluster=40, cluster_std=0.3
    )
    return generate(spec)


# Three concentric rings that are not density-connected at mu=5, surrounded by
# background noise kept clear of the ring bands.
RING_PARAMS = {
    "ring_radii": [1.0, 3.0, 5.0],
    "points_per_cluster": 500,
    "noise_points": 600,
    "noise_padding": 0.5,
    "noise_clearance": 0.5,
}


@pytest.fixture
def rings() -> tuple[PointSet, Clustering]:
    return generate(GeneratorSpec(kind=GeneratorKind.RINGS_WITH_NOISE, seed=3, **RING_PARAMS))


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


@pytest.fixture
def write_text(tmp_path: Path):
    """Write a text file under tmp_path and return its path."""

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
