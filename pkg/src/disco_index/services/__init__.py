"""Density-connectivity, scoring, data and experiment services."""

from .clusterers import dbscan, kmeans, kmeans_fit
from .datasets import (
    load_csv,
    load_labels,
    perturb_labels,
    random_labeling,
    save_csv,
    z_standardize,
)
from .dc_core import DensityGraph, build_density_graph, core_distances, dc_dist
from .disco import noise_probe, pointwise_report, score
from .experiments import run_ablation, run_correlation, run_sweep
from .external_eval import ari, ari_with_noise, pearson
from .generators import generate

__all__ = [
    "build_density_graph",
    "core_distances",
    "dc_dist",
    "DensityGraph",
    "score",
    "pointwise_report",
    "noise_probe",
    "ari",
    "ari_with_noise",
    "pearson",
    "load_csv",
    "load_labels",
    "save_csv",
    "z_standardize",
    "perturb_labels",
    "random_labeling",
    "generate",
    "dbscan",
    "kmeans",
    "kmeans_fit",
    "run_sweep",
    "run_ablation",
    "run_correlation",
]
