"""Density-graph containers: core-distances, the MST and per-cluster stats."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray


@dataclass(frozen=True)
class CoreDistances:
    """kappa[i] is the distance from point i to its mu-th nearest neighbor."""

    kappa: NDArray[np.float64]
    mu: int
    include_self: bool = False

    @property
    def n(self) -> int:
        return int(self.kappa.shape[0])


@dataclass(frozen=True)
class MrdMst:
    """Minimum spanning tree over mutual reachability distances.

    Edges are stored in the strict total order used to build the tree:
    weight ascending, then (a, b) lexicographically with a < b.
    """

    n: int
    a: NDArray[np.intp]
    b: NDArray[np.intp]
    weight: NDArray[np.float64]

    @property
    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (int(u), int(v), float(w)) for u, v, w in zip(self.a, self.b, self.weight, strict=True)
        ]

    @property
    def total_weight(self) -> float:
        return float(np.sort(self.weight).sum())


@dataclass(frozen=True)
class ClusterStats:
    """kappa_max (the largest core-distance) and size per normalized cluster."""

    kappa_max: NDArray[np.float64]
    size: NDArray[np.int64]
