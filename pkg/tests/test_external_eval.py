"""Tests for ARI and Pearson correlation."""

from itertools import combinations

import numpy as np
import pytest

from src.disco_index.errors import InputError, UndefinedCorrelationError
from src.disco_index.models import Clustering
from src.disco_index.services.external_eval import (
    ari,
    ari_with_noise,
    contingency_table,
    noise_to_singletons,
    pearson,
)


def labels(*values: int) -> Clustering:
    return Clustering.from_labels(list(values))


def brute_force_ari(a: Clustering, b: Clustering) -> float | None:
    """Adjusted index from explicit pair enumeration; None when it cannot be adjusted."""
    both = same_a = same_b = 0
    pairs = 0
    for i, j in combinations(range(a.n), 2):
        in_a = a.labels[i] == a.labels[j]
        in_b = b.labels[i] == b.labels[j]
        both += int(in_a and in_b)
        same_a += int(in_a)
        same_b += int(in_b)
        pairs += 1
    expected = same_a * same_b / pairs
    maximum = (same_a + same_b) / 2
    if maximum == expected:
        return None
    return (both - expected) / (maximum - expected)


def test_identical_partitions() -> None:
    assert ari(labels(0, 0, 1, 1), labels(0, 0, 1, 1)) == 1.0
    assert ari(labels(0, 0, 1, 1), labels(5, 5, 3, 3)) == 1.0


def test_split_cluster() -> None:
    assert ari(labels(0, 0, 1, 1), labels(0, 0, 1, 2)) == pytest.approx(4.0 / 7.0)
    assert ari(labels(0, 0, 1, 1), labels(0, 0, 1, 2)) == pytest.approx(0.5714285714)


def test_chance_level_agreement_is_zero() -> None:
    assert ari(labels(0, 0, 1, 1), labels(0, 0, 0, 1)) == pytest.approx(0.0)


def test_ari_is_symmetric() -> None:
    a, b = labels(0, 0, 1, 1, 2, 2), labels(0, 1, 1, 1, 2, 0)
    assert ari(a, b) == ari(b, a)


def test_degenerate_partitions() -> None:
    singletons = labels(0, 1, 2, 3)
    assert ari(singletons, labels(9, 8, 7, 6)) == 1.0
    assert ari(labels(0, 0, 0, 0), singletons) == 0.0
    assert ari(labels(0), labels(3)) == 1.0


def test_matches_pair_enumeration() -> None:
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(4, 25))
        a = Clustering.from_labels(rng.integers(0, 4, n))
        b = Clustering.from_labels(rng.integers(0, 3, n))
        expected = brute_force_ari(a, b)
        if expected is None:
            continue
        assert ari(a, b) == pytest.approx(expected, abs=1e-12)


def test_contingency_table_counts() -> None:
    table = contingency_table(labels(0, 0, 1, 1), labels(0, 0, 0, 1))
    assert table.counts.tolist() == [[2, 0], [1, 1]]
    assert table.row_sums.tolist() == [2, 2]
    assert table.column_sums.tolist() == [3, 1]
    assert table.total == 4


def test_contingency_table_size_mismatch() -> None:
    with pytest.raises(InputError):
        contingency_table(labels(0, 1), labels(0, 1, 2))


def test_noise_becomes_fresh_singletons() -> None:
    assert noise_to_singletons(labels(0, 0, -1, 3, -1)).labels.tolist() == [0, 0, 4, 3, 5]
    assert noise_to_singletons(labels(-1, -1)).labels.tolist() == [0, 1]


def test_ari_with_noise() -> None:
    assert ari_with_noise(labels(0, 0, -1, -1), labels(1, 1, -1, -1)) == 1.0
    # merging the two noise points into one cluster is a disagreement
    assert ari_with_noise(labels(0, 0, -1, -1), labels(0, 0, 1, 1)) < 1.0


def test_pearson() -> None:
    assert pearson([1.0, 2.0, 3.0], [2.0, 4.0, 6.0]) == pytest.approx(1.0)
    assert pearson([1.0, 2.0, 3.0], [3.0, 2.0, 1.0]) == pytest.approx(-1.0)
    assert -1.0 <= pearson([0.1, 0.5, 0.2, 0.9], [1.0, 0.0, 0.3, 0.2]) <= 1.0


def test_pearson_undefined_for_constant_series() -> None:
    with pytest.raises(UndefinedCorrelationError):
        pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])


@pytest.mark.parametrize(
    ("xs", "ys"),
    [([1.0, 2.0], [1.0]), ([1.0], [2.0]), ([[1.0, 2.0]], [[1.0, 2.0]])],
)
def test_pearson_rejects_bad_shapes(xs: list, ys: list) -> None:
    with pytest.raises(InputError):
        pearson(xs, ys)
