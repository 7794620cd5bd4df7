"""Tests for the seeded synthetic generators."""

import numpy as np
import pytest
from scipy.spatial.distance import cdist

from src.disco_index.errors import DataNotFoundError, ParameterError
from src.disco_index.models import GeneratorKind, GeneratorSpec, NoiseDistribution
from src.disco_index.services.generators import (
    POISSON_LAMBDA,
    background_noise,
    blob_centers,
    check_rings_disjoint,
    generate,
    parse_key_values,
    read_gen_config,
    spec_from_params,
)


def spec(kind: GeneratorKind, **fields) -> GeneratorSpec:
    return GeneratorSpec(kind=kind, seed=fields.pop("seed", 0), **fields)


@pytest.mark.parametrize("kind", list(GeneratorKind))
def test_same_seed_same_bytes(kind: GeneratorKind) -> None:
    first, first_labels = generate(spec(kind, noise_points=5))
    second, second_labels = generate(spec(kind, noise_points=5))
    assert first.points.tobytes() == second.points.tobytes()
    assert np.array_equal(first_labels.labels, second_labels.labels)


def test_different_seeds_differ() -> None:
    a, _ = generate(spec(GeneratorKind.BLOBS, seed=1))
    b, _ = generate(spec(GeneratorKind.BLOBS, seed=2))
    assert not np.array_equal(a.points, b.points)


def test_clusters_come_first_then_noise() -> None:
    blobs = spec(GeneratorKind.BLOBS, n_clusters=3, points_per_cluster=4, noise_points=2)
    _, labels = generate(blobs)
    assert labels.labels.tolist() == [0] * 4 + [1] * 4 + [2] * 4 + [-1] * 2


class TestRings:
    def test_points_lie_in_their_annulus(self) -> None:
        ps, labels = generate(spec(GeneratorKind.RINGS_WITH_NOISE, points_per_cluster=50))
        radius = np.linalg.norm(ps.points, axis=1)
        for ring, r in enumerate([1.0, 2.0, 3.0]):
            members = radius[labels.labels == ring]
            assert members.min() >= r - 0.1 - 1e-12
            assert members.max() <= r + 0.1 + 1e-12

    def test_each_point_has_its_own_sector(self) -> None:
        ps, labels = generate(spec(GeneratorKind.RINGS_WITH_NOISE, points_per_cluster=50))
        for ring in range(3):
            members = ps.points[labels.labels == ring]
            angle = np.arctan2(members[:, 1], members[:, 0]) % (2 * np.pi)
            assert np.floor(angle * 50 / (2 * np.pi)).tolist() == list(range(50))

    def test_noise_points_are_added(self) -> None:
        _, labels = generate(spec(GeneratorKind.RINGS_WITH_NOISE, noise_points=25))
        assert labels.noise.size == 25
        assert labels.k == 3

    def test_overlapping_rings_are_rejected(self) -> None:
        overlapping = spec(
            GeneratorKind.RINGS_WITH_NOISE,
            n_clusters=2,
            ring_radii=[1.0, 1.2],
            ring_centers=[(0.0, 0.0), (0.5, 0.0)],
        )
        with pytest.raises(ParameterError, match="overlap"):
            check_rings_disjoint(overlapping)

    def test_side_by_side_rings_are_disjoint(self) -> None:
        apart = spec(
            GeneratorKind.RINGS_WITH_NOISE,
            n_clusters=2,
            ring_radii=[1.0, 1.0],
            ring_centers=[(0.0, 0.0), (5.0, 0.0)],
        )
        check_rings_disjoint(apart)
        ps, _ = generate(apart)
        assert ps.n == 200

    @pytest.mark.parametrize(
        "fields",
        [
            {"n_clusters": 1, "ring_radii": [0.05]},
            {"n_clusters": 2, "ring_radii": [1.0]},
            {"dim": 3},
        ],
    )
    def test_invalid_layouts(self, fields: dict) -> None:
        with pytest.raises(ParameterError):
            generate(spec(GeneratorKind.RINGS_WITH_NOISE, **fields))


def test_two_moons_without_jitter() -> None:
    ps, labels = generate(spec(GeneratorKind.TWO_MOONS, points_per_cluster=5))
    assert labels.labels.tolist() == [0] * 5 + [1] * 5
    assert ps.points[0].tolist() == pytest.approx([1.0, 0.0])
    assert ps.points[4].tolist() == pytest.approx([-1.0, 0.0], abs=1e-12)
    assert ps.points[5].tolist() == pytest.approx([0.0, 0.5])


def test_two_moons_jitter_moves_points() -> None:
    still, _ = generate(spec(GeneratorKind.TWO_MOONS, points_per_cluster=20))
    shaken, _ = generate(spec(GeneratorKind.TWO_MOONS, points_per_cluster=20, jitter=0.1))
    offset = np.abs(shaken.points - still.points)
    assert offset.max() > 0
    assert offset.max() < 1.0


def test_uniform_balls_with_probe() -> None:
    ps, labels = generate(
        spec(GeneratorKind.UNIFORM_BALLS, n_clusters=2, points_per_cluster=100, probe_distance=3.0)
    )
    centers = np.array([[0.0, 0.0], [10.0, 0.0]])
    for ball, center in enumerate(centers):
        members = ps.points[labels.labels == ball]
        assert np.linalg.norm(members - center, axis=1).max() <= 2.0 + 1e-12
    assert labels.labels[-1] == -1
    assert ps.points[-1].tolist() == [-3.0, 0.0]


def test_uniform_balls_in_higher_dimension() -> None:
    ps, _ = generate(spec(GeneratorKind.UNIFORM_BALLS, n_clusters=1, dim=5, radius=1.5))
    assert ps.m == 5
    assert np.linalg.norm(ps.points, axis=1).max() <= 1.5 + 1e-12


def test_blob_centers_form_a_grid() -> None:
    assert blob_centers(4, 2, 10.0).tolist() == [[0, 0], [10, 0], [0, 10], [10, 10]]
    assert blob_centers(3, 1, 2.0).tolist() == [[0.0], [2.0], [4.0]]


def test_chain_ramp_gaps_grow_linearly() -> None:
    ps, labels = generate(spec(GeneratorKind.CHAIN_RAMP, n_points=10, gap_start=0.1, gap_end=1.0))
    gaps = np.diff(ps.points[:, 0])
    assert gaps.tolist() == pytest.approx(np.linspace(0.1, 1.0, 9).tolist())
    assert labels.labels.tolist() == [0] * 5 + [-1] * 5


class TestBackgroundNoise:
    reference = np.array([[0.0, 0.0], [10.0, 2.0]])

    def test_uniform_stays_in_padded_box(self) -> None:
        noise = background_noise(np.random.default_rng(0), self.reference, 500)
        assert np.all(noise >= [-1.0, -0.2]) and np.all(noise <= [11.0, 2.2])

    def test_gaussian_centers_on_reference(self) -> None:
        noise = background_noise(
            np.random.default_rng(0), self.reference, 4000, NoiseDistribution.GAUSSIAN
        )
        assert noise.mean(axis=0).tolist() == pytest.approx([5.0, 1.0], abs=0.3)

    def test_poisson_offsets_are_integers(self) -> None:
        noise = background_noise(
            np.random.default_rng(0), self.reference, 50, NoiseDistribution.POISSON
        )
        shifted = noise - self.reference.mean(axis=0) + POISSON_LAMBDA
        assert np.array_equal(shifted, np.round(shifted))
        assert shifted.min() >= 0

    def test_zero_count(self) -> None:
        assert background_noise(np.random.default_rng(0), self.reference, 0).shape == (0, 2)

    def test_padding_widens_the_box(self) -> None:
        noise = background_noise(np.random.default_rng(0), self.reference, 2000, padding=0.5)
        assert np.all(noise >= [-5.0, -1.0]) and np.all(noise <= [15.0, 3.0])
        assert noise[:, 0].min() < -1.0 and noise[:, 0].max() > 11.0

    def test_clearance_keeps_noise_away_from_clusters(self) -> None:
        noise = background_noise(np.random.default_rng(0), self.reference, 300, clearance=1.5)
        assert noise.shape == (300, 2)
        assert cdist(noise, self.reference).min() >= 1.5

    def test_unreachable_clearance(self) -> None:
        with pytest.raises(ParameterError, match="clearance"):
            background_noise(np.random.default_rng(0), self.reference, 10, clearance=100.0)

    def test_spec_fields_reach_the_generator(self) -> None:
        ps, labels = generate(
            spec(
                GeneratorKind.RINGS_WITH_NOISE,
                noise_points=200,
                noise_padding=0.5,
                noise_clearance=0.4,
            )
        )
        clustered = ps.points[labels.labels != -1]
        noise = ps.points[labels.noise]
        assert cdist(noise, clustered).min() >= 0.4
        assert np.abs(noise).max() > 3.1 * 1.2


class TestParameters:
    def test_spec_from_params_parses_json_lists(self) -> None:
        parsed = spec_from_params(
            "rings_with_noise", 4, {"n_clusters": "2", "ring_radii": "[1, 3]"}
        )
        assert parsed.kind == GeneratorKind.RINGS_WITH_NOISE
        assert parsed.seed == 4
        assert parsed.n_clusters == 2
        assert parsed.ring_radii == [1.0, 3.0]

    @pytest.mark.parametrize(
        "params",
        [{"colour": "red"}, {"n_clusters": "0"}, {"ring_radii": "[1,"}],
    )
    def test_invalid_params(self, params: dict) -> None:
        with pytest.raises(ParameterError):
            spec_from_params(GeneratorKind.RINGS_WITH_NOISE, 0, params)

    def test_parse_key_values_skips_comments(self) -> None:
        lines = ["# rings", "", "n_clusters = 2  # two", "ring_width=0.3"]
        assert parse_key_values(lines) == {"n_clusters": "2", "ring_width": "0.3"}

    def test_parse_key_values_rejects_bare_words(self) -> None:
        with pytest.raises(ParameterError, match="line 2"):
            parse_key_values(["a=1", "oops"])

    def test_read_gen_config(self, write_text, tmp_path) -> None:
        path = write_text("gen.cfg", "points_per_cluster=10\njitter=0.05\n")
        assert read_gen_config(path) == {"points_per_cluster": "10", "jitter": "0.05"}
        with pytest.raises(DataNotFoundError):
            read_gen_config(tmp_path / "missing.cfg")
