"""Parameter models for generators, clusterers and preprocessing."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field


class StandardizeMode(str, Enum):
    """Feature standardization conventions."""

    PER_FEATURE = "per-feature"
    GLOBAL = "global"  # one mean/stddev over all entries (image data)
    NONE = "none"


class MstAlgorithm(str, Enum):
    """MST construction strategy; both produce the identical tree."""

    AUTO = "auto"
    KRUSKAL = "kruskal"
    PRIM = "prim"


class GeneratorKind(str, Enum):
    """Synthetic dataset families."""

    RINGS_WITH_NOISE = "rings_with_noise"
    TWO_MOONS = "two_moons"
    UNIFORM_BALLS = "uniform_balls"
    CHAIN_RAMP = "chain_ramp"
    BLOBS = "blobs"


class NoiseDistribution(str, Enum):
    """How background noise points are drawn."""

    UNIFORM = "uniform"  # padded bounding box of the cluster points
    GAUSSIAN = "gaussian"  # mean and per-feature stddev of the cluster points
    POISSON = "poisson"  # lambda=5 counts per coordinate, shifted to the centroid


class PerturbOp(str, Enum):
    """Label perturbations used by the ablation ramps."""

    SWAP_RANDOM = "swap_random"
    RELABEL_NOISE = "relabel_noise"
    DENSIFY_NOISE = "densify_noise"


class GeneratorSpec(BaseModel):
    """Parameters for one synthetic dataset.

    Each generator reads the fields relevant to its kind and ignores the rest.
    """

    model_config = ConfigDict(frozen=True)

    kind: GeneratorKind
    seed: int = Field(..., ge=0, description="Mandatory PRNG seed (PCG64)")

    # Shared
    n_clusters: int = Field(3, ge=1)
    points_per_cluster: int = Field(100, ge=1)
    noise_points: int = Field(0, ge=0)
    noise_distribution: NoiseDistribution = NoiseDistribution.UNIFORM
    noise_padding: float = Field(
        0.1, ge=0, description="Uniform noise box margin, fraction of the cluster extent"
    )
    noise_clearance: float = Field(
        0.0, ge=0, description="Minimum distance from background noise to any cluster point"
    )
    dim: int = Field(2, ge=1)

    # rings_with_noise
    ring_radii: list[float] | None = Field(None, description="Defaults to 1, 2, 3, ...")
    ring_width: float = Field(0.2, gt=0)
    ring_centers: list[tuple[float, float]] | None = Field(
        None, description="Defaults to concentric rings at the origin"
    )

    # two_moons
    jitter: float = Field(0.0, ge=0, description="Gaussian jitter, fraction of the moon radius")

    # uniform_balls
    radius: float = Field(2.0, gt=0)
    center_distance: float = Field(10.0, ge=0)
    probe_distance: float | None = Field(
        None, ge=0, description="Adds one noise point this far from the first ball's center"
    )

    # blobs
    cluster_std: float = Field(0.5, gt=0)
    spacing: float = Field(10.0, gt=0)

    # chain_ramp
    n_points: int = Field(50, ge=2)
    gap_start: float = Field(0.1, gt=0)
    gap_end: float = Field(1.0, gt=0)
    cluster_fraction: float = Field(0.5, gt=0, le=1)


class DbscanParams(BaseModel):
    """DBSCAN radius and self-inclusive neighbor count."""

    model_config = ConfigDict(frozen=True)

    eps: float = Field(..., gt=0)
    min_pts: int = Field(5, ge=1)


class KMeansParams(BaseModel):
    """Lloyd k-means parameters."""

    model_config = ConfigDict(frozen=True)

    k: int = Field(..., ge=1)
    max_iters: int = Field(300, ge=1)
    seed: int = Field(0, ge=0)
    tolerance: float = Field(1e-4, ge=0)
