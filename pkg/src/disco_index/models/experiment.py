"""Records produced by sweeps, ablation ramps and correlation runs."""

from __future__ import annotations

from enum import Enum
from pathlib import Path

from pydantic import BaseModel, Field, model_validator

from .params import GeneratorSpec, StandardizeMode


class SweepParameter(str, Enum):
    """Clusterer parameter varied by a sweep."""

    EPS = "eps"  # DBSCAN radius
    K = "k"  # k-means cluster count


class RampKind(str, Enum):
    """Ablation ramps."""

    SWAP = "swap"
    SEPARATION = "separation"
    JITTER = "jitter"
    NOISE_DENSITY = "noise_density"
    NOISE_DISTANCE = "noise_distance"
    MU = "mu"


class SweepRow(BaseModel):
    value: float
    clusters: int = Field(..., ge=0)
    noise: int = Field(..., ge=0)
    disco: float = Field(..., ge=-1.0, le=1.0)
    ari: float | None = None
    best: bool = False


class SweepResult(BaseModel):
    """One row per setting, sorted by parameter value."""

    parameter: SweepParameter
    rows: list[SweepRow]
    pcc: float | None = Field(None, description="Pearson correlation of DISCO and ARI")

    @model_validator(mode="after")
    def _rows_sorted(self) -> SweepResult:
        values = [r.value for r in self.rows]
        if values != sorted(values):
            raise ValueError("sweep rows must be sorted by parameter value")
        return self

    @property
    def best_row(self) -> SweepRow:
        return next(r for r in self.rows if r.best)


class AblationRow(BaseModel):
    value: float
    disco: float = Field(..., ge=-1.0, le=1.0)
    rho_sparse: float | None = None
    rho_far: float | None = None
    clusters: int = Field(..., ge=0)
    noise: int = Field(..., ge=0)


class AblationResult(BaseModel):
    ramp: RampKind
    rows: list[AblationRow]


class CorrelationRow(BaseModel):
    name: str
    clusters: int = Field(..., ge=0)
    noise: int = Field(..., ge=0)
    disco: float = Field(..., ge=-1.0, le=1.0)
    ari: float


class CorrelationResult(BaseModel):
    rows: list[CorrelationRow]
    pcc: float | None = None


class RunConfig(BaseModel):
    """Resolved inputs of one CLI invocation."""

    command: str
    data: Path | None = None
    generator: GeneratorSpec | None = None
    labels: Path | None = None
    label_column: str | None = None
    mu: int = Field(5, ge=1)
    standardize: StandardizeMode = StandardizeMode.PER_FEATURE
    pointwise: Path | None = None
    out: Path | None = None
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def _one_source(self) -> RunConfig:
        if (self.data is None) == (self.generator is None):
            raise ValueError("exactly one data source is required: --data or --generator")
        return self
