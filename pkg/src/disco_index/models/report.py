"""Pointwise and aggregate DISCO results."""

from enum import Enum

from pydantic import BaseModel, Field


class PointKind(str, Enum):
    """Which rule produced a point's score."""

    CLUSTER = "cluster"
    NOISE = "noise"
    SINGLETON_ZERO = "singleton_zero"
    ONE_CLUSTER_ZERO = "one_cluster_zero"
    ALL_NOISE_MINUS_ONE = "all_noise_minus_one"
    ONE_CLUSTER_VS_NOISE = "one_cluster_vs_noise"


class PointScore(BaseModel):
    """Score of a single point plus the terms that explain it.

    Cluster ids in the detail fields are the caller's original labels.
    """

    index: int = Field(..., ge=0)
    label: int
    kind: PointKind
    value: float = Field(..., ge=-1.0, le=1.0)

    # cluster points
    own_mean: float | None = Field(None, description="Mean dc-dist to the own cluster")
    other_mean: float | None = Field(
        None, description="Mean dc-dist to the minimizing other cluster, or min dc-dist to noise"
    )
    nearest_cluster: int | None = None

    # noise points
    rho_sparse: float | None = None
    rho_far: float | None = None
    sparse_cluster: int | None = None
    far_cluster: int | None = None


class ScoreReport(BaseModel):
    """Aggregate DISCO value with every point's score."""

    disco: float = Field(..., ge=-1.0, le=1.0)
    mu: int = Field(..., ge=1)
    n_clusters: int = Field(..., ge=0)
    n_noise: int = Field(..., ge=0)
    point_scores: list[PointScore]
    mean_rho_sparse: float | None = None
    mean_rho_far: float | None = None

    @property
    def n(self) -> int:
        return len(self.point_scores)

    def values(self) -> list[float]:
        return [p.value for p in self.point_scores]
