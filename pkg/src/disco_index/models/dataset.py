"""Point sets and clusterings.

Both are frozen containers over read-only numpy arrays. They validate on
construction, so every service can assume well-formed input.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..errors import InputError, LabelError

NOISE_LABEL = -1


def _frozen(array: NDArray[np.generic]) -> NDArray[np.generic]:
    array = np.ascontiguousarray(array)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class PointSet:
    """An n x m matrix of finite coordinates."""

    points: NDArray[np.float64]

    def __post_init__(self) -> None:
        try:
            points = np.array(self.points, dtype=np.float64)
        except (TypeError, ValueError) as e:
            raise InputError(f"Coordinates are not numeric: {e}") from e
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if points.ndim != 2:
            raise InputError(f"Expected a 2-d coordinate matrix, got {points.ndim} dimensions")
        n, m = points.shape
        if n < 1 or m < 1:
            raise InputError(f"Point set must have n >= 1 and m >= 1, got n={n}, m={m}")
        bad = ~np.isfinite(points)
        if bad.any():
            row, col = (int(v) for v in np.argwhere(bad)[0])
            raise InputError(f"Non-finite coordinate at row {row}, column {col}")
        object.__setattr__(self, "points", _frozen(points))

    @property
    def n(self) -> int:
        return int(self.points.shape[0])

    @property
    def m(self) -> int:
        return int(self.points.shape[1])

    def take(self, order: Sequence[int] | NDArray[np.intp]) -> PointSet:
        """Rows in the given order (used for permutations and subsets)."""
        return PointSet(self.points[np.asarray(order, dtype=np.intp)])


@dataclass(frozen=True)
class Clustering:
    """A labeling of n points into clusters plus a noise set.

    Any integer label is accepted as a cluster id except ``NOISE_LABEL``
    (-1), which marks noise. Cluster ids are normalized internally to
    ``0..k-1`` in ascending order of the original ids.
    """

    labels: NDArray[np.int64]
    cluster_ids: NDArray[np.int64] = field(init=False, repr=False)
    cluster_index: NDArray[np.intp] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        raw = np.asarray(self.labels)
        if raw.ndim != 1:
            raise LabelError(f"Labels must be a flat vector, got shape {raw.shape}")
        if raw.size and not np.issubdtype(raw.dtype, np.integer):
            if not np.issubdtype(raw.dtype, np.floating) or not np.all(np.isfinite(raw)):
                raise LabelError("Labels must be integers")
            if not np.all(raw == np.round(raw)):
                first = int(np.flatnonzero(raw != np.round(raw))[0])
                raise LabelError(f"Label at index {first} is not an integer: {raw[first]}")
        labels = raw.astype(np.int64)
        if (labels < NOISE_LABEL).any():
            first = int(np.flatnonzero(labels < NOISE_LABEL)[0])
            raise LabelError(
                f"Label {labels[first]} at index {first} is below the noise label {NOISE_LABEL}"
            )
        ids = np.unique(labels[labels != NOISE_LABEL])
        index = np.full(labels.shape[0], -1, dtype=np.intp)
        clustered = labels != NOISE_LABEL
        index[clustered] = np.searchsorted(ids, labels[clustered])
        object.__setattr__(self, "labels", _frozen(labels))
        object.__setattr__(self, "cluster_ids", _frozen(ids))
        object.__setattr__(self, "cluster_index", _frozen(index))

    @classmethod
    def from_labels(cls, labels: ArrayLike) -> Clustering:
        return cls(np.asarray(labels))

    @property
    def n(self) -> int:
        return int(self.labels.shape[0])

    @property
    def k(self) -> int:
        return int(self.cluster_ids.shape[0])

    @cached_property
    def noise(self) -> NDArray[np.intp]:
        """Indices of noise points, ascending."""
        return _frozen(np.flatnonzero(self.labels == NOISE_LABEL))

    @cached_property
    def clusters(self) -> list[NDArray[np.intp]]:
        """Member indices per normalized cluster, ascending within each."""
        order = np.argsort(self.cluster_index, kind="stable")
        order = order[self.cluster_index[order] >= 0]
        bounds = np.searchsorted(self.cluster_index[order], np.arange(self.k + 1))
        return [_frozen(order[bounds[c] : bounds[c + 1]]) for c in range(self.k)]

    @cached_property
    def sizes(self) -> NDArray[np.int64]:
        return _frozen(np.bincount(self.cluster_index[self.cluster_index >= 0], minlength=self.k))

    def is_noise(self, i: int) -> bool:
        return bool(self.labels[i] == NOISE_LABEL)

    def check_size(self, n: int) -> None:
        """Raise LabelError unless the labeling covers exactly n points."""
        if self.n != n:
            raise LabelError(f"Label vector has {self.n} entries but the data has {n} points")

    def take(self, order: Sequence[int] | NDArray[np.intp]) -> Clustering:
        return Clustering(self.labels[np.asarray(order, dtype=np.intp)])
