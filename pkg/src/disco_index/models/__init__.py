"""Domain types: point sets, clusterings, graphs, reports and parameters."""

from .dataset import NOISE_LABEL, Clustering, PointSet
from .experiment import (
    AblationResult,
    AblationRow,
    CorrelationResult,
    CorrelationRow,
    RampKind,
    RunConfig,
    SweepParameter,
    SweepResult,
    SweepRow,
)
from .graph import ClusterStats, CoreDistances, MrdMst
from .params import (
    DbscanParams,
    GeneratorKind,
    GeneratorSpec,
    KMeansParams,
    MstAlgorithm,
    NoiseDistribution,
    PerturbOp,
    StandardizeMode,
)
from .report import PointKind, PointScore, ScoreReport

__all__ = [
    "NOISE_LABEL",
    "PointSet",
    "Clustering",
    "CoreDistances",
    "MrdMst",
    "ClusterStats",
    "PointKind",
    "PointScore",
    "ScoreReport",
    "StandardizeMode",
    "MstAlgorithm",
    "GeneratorKind",
    "NoiseDistribution",
    "PerturbOp",
    "GeneratorSpec",
    "DbscanParams",
    "KMeansParams",
    "SweepParameter",
    "RampKind",
    "SweepRow",
    "SweepResult",
    "AblationRow",
    "AblationResult",
    "CorrelationRow",
    "CorrelationResult",
    "RunConfig",
]
