"""CSV ingestion, standardization and label perturbation."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.spatial.distance import cdist

from ..errors import DataNotFoundError, InputError, LabelError, ParameterError
from ..models import NOISE_LABEL, Clustering, PerturbOp, PointSet, StandardizeMode

logger = logging.getLogger(__name__)

LABEL_COLUMN = "label"


def _read_table(path: Path, has_header: bool) -> pd.DataFrame:
    if not path.exists():
        raise DataNotFoundError(f"File not found: {path}")
    try:
        frame = pd.read_csv(
            path,
            header=0 if has_header else None,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        raise InputError(f"{path}: file is empty") from e
    except pd.errors.ParserError as e:
        raise InputError(f"{path}: ragged rows: {e}") from e
    except UnicodeDecodeError as e:
        raise InputError(f"{path}: not UTF-8 text: {e}") from e
    if frame.empty:
        raise InputError(f"{path}: no data rows")
    if not has_header:
        frame.columns = [str(c) for c in range(frame.shape[1])]
    return frame


def _numeric(frame: pd.DataFrame, path: Path, has_header: bool) -> np.ndarray:
    """Parse every cell as a float, reporting the first bad cell by line and column.

    Cells go through ``float`` so written values read back bit-exact.
    """
    first_line = 2 if has_header else 1
    out = np.empty(frame.shape, dtype=np.float64)
    for j, column in enumerate(frame.columns):
        for row, cell in enumerate(frame[column].fillna("").astype(str).str.strip()):
            where = f"{path}: line {first_line + row}, column '{column}'"
            if cell == "":
                raise InputError(f"{where}: missing value (ragged row or empty cell)")
            try:
                out[row, j] = float(cell)
            except ValueError:
                raise InputError(f"{where}: non-numeric value {cell!r}") from None
    return out


def _resolve_label_column(frame: pd.DataFrame, label_column: str, path: Path) -> str:
    if label_column in frame.columns:
        return label_column
    try:
        position = int(label_column)
    except ValueError:
        raise InputError(f"{path}: no label column '{label_column}'") from None
    if not -frame.shape[1] <= position < frame.shape[1]:
        raise InputError(f"{path}: label column index {position} is out of range")
    return str(frame.columns[position])


def load_csv(
    path: Path | str,
    has_header: bool = True,
    label_column: str | None = None,
) -> tuple[PointSet, Clustering | None]:
    """Read features (and optionally labels) from a comma-separated file.

    ``label_column`` is a header name or a 0-based column position.
    """
    path = Path(path)
    frame = _read_table(path, has_header)
    labels: Clustering | None = None
    if label_column is not None:
        column = _resolve_label_column(frame, label_column, path)
        values = _numeric(frame[[column]], path, has_header)[:, 0]
        labels = Clustering(values)
        frame = frame.drop(columns=[column])
    if frame.shape[1] == 0:
        raise InputError(f"{path}: no feature columns")
    points = PointSet(_numeric(frame, path, has_header))
    logger.debug(f"Loaded {points.n}x{points.m} points from {path}")
    return points, labels


def load_labels(path: Path | str, has_header: bool = False) -> Clustering:
    """Read a single-column label file."""
    path = Path(path)
    frame = _read_table(path, has_header)
    if frame.shape[1] != 1:
        raise LabelError(f"{path}: expected one label column, found {frame.shape[1]}")
    return Clustering(_numeric(frame, path, has_header)[:, 0])


def save_csv(
    path: Path | str,
    ps: PointSet,
    clustering: Clustering | None = None,
    header: bool = True,
) -> None:
    """Write features as ``x0..x{m-1}`` plus a trailing ``label`` column."""
    frame = pd.DataFrame(ps.points, columns=[f"x{j}" for j in range(ps.m)])
    if clustering is not None:
        clustering.check_size(ps.n)
        frame[LABEL_COLUMN] = clustering.labels
    frame.to_csv(Path(path), index=False, header=header, lineterminator="\n")


def z_standardize(
    ps: PointSet,
    mode: StandardizeMode = StandardizeMode.PER_FEATURE,
    ddof: int = 0,
) -> PointSet:
    """Shift and scale to mean 0 and standard deviation 1.

    Population stddev by default (``ddof=0``). Constant columns (or a
    constant matrix in global mode) are only centered, with a warning.
    """
    if mode == StandardizeMode.NONE:
        return ps
    x = ps.points
    if ps.n <= ddof:
        raise ParameterError(f"ddof={ddof} needs more than {ddof} points, got n={ps.n}")
    if mode == StandardizeMode.GLOBAL:
        mean = x.mean()
        std = x.std(ddof=ddof)
        centered = x - mean
        if std == 0:
            logger.warning("All entries are equal; global standardization only centers them")
            return PointSet(centered)
        return PointSet(centered / std)

    means = x.mean(axis=0)
    stds = x.std(axis=0, ddof=ddof)
    constant = stds == 0
    if constant.any():
        logger.warning(
            f"Zero-variance columns {np.flatnonzero(constant).tolist()} are centered, not scaled"
        )
    scale = np.where(constant, 1.0, stds)
    return PointSet((x - means) / scale)


def random_labeling(n: int, k: int, noise_fraction: float = 0.0, seed: int = 0) -> Clustering:
    """Uniformly random labels in 0..k-1, with a share of points set to noise."""
    if n < 1 or k < 1:
        raise ParameterError(f"random labeling needs n >= 1 and k >= 1, got n={n}, k={k}")
    if not 0.0 <= noise_fraction <= 1.0:
        raise ParameterError(f"noise_fraction={noise_fraction} is outside [0, 1]")
    rng = np.random.default_rng(seed)
    labels = rng.integers(0, k, size=n)
    n_noise = int(round(noise_fraction * n))
    labels[rng.choice(n, size=n_noise, replace=False)] = NOISE_LABEL
    return Clustering(labels)


def _count(amount: float | int, available: int, op: PerturbOp) -> int:
    """An int amount is a count; a float amount is a fraction of the available points."""
    if amount < 0:
        raise ParameterError(f"{op.value}: amount={amount} must be non-negative")
    if isinstance(amount, float):
        if amount > 1.0:
            raise ParameterError(f"{op.value}: fraction {amount} exceeds 1")
        count = int(round(amount * available))
    else:
        count = int(amount)
    if count > available:
        raise ParameterError(
            f"{op.value}: amount {amount} exceeds the {available} available points"
        )
    return count


def perturb_labels(
    c: Clustering,
    op: PerturbOp,
    amount: float | int,
    seed: int = 0,
    points: PointSet | None = None,
    target: int | None = None,
) -> Clustering:
    """Return a perturbed copy of a clustering; the input is not modified.

    - ``swap_random``: move a fraction of cluster points to a random other cluster.
    - ``relabel_noise``: label cluster points (of cluster ``target`` if given) as noise.
    - ``densify_noise``: label as noise the cluster points nearest to the
      lowest-index noise point, growing a dense noise group. Needs ``points``.
    """
    rng = np.random.default_rng(seed)
    labels = c.labels.copy()
    clustered = np.flatnonzero(c.labels != NOISE_LABEL)

    if op == PerturbOp.SWAP_RANDOM:
        count = _count(amount, clustered.size, op)
        if count == 0:
            return Clustering(labels)
        if c.k < 2:
            raise ParameterError(f"swap_random needs at least two clusters, got k={c.k}")
        chosen = np.sort(rng.choice(clustered, size=count, replace=False))
        offset = rng.integers(1, c.k, size=count)
        labels[chosen] = c.cluster_ids[(c.cluster_index[chosen] + offset) % c.k]
        return Clustering(labels)

    if op == PerturbOp.RELABEL_NOISE:
        pool = clustered if target is None else np.flatnonzero(c.labels == target)
        if target is not None and (target == NOISE_LABEL or pool.size == 0):
            raise ParameterError(f"relabel_noise: no cluster with label {target}")
        count = _count(amount, pool.size, op)
        labels[rng.choice(pool, size=count, replace=False)] = NOISE_LABEL
        return Clustering(labels)

    if points is None:
        raise ParameterError("densify_noise needs the point set")
    c.check_size(points.n)
    if c.noise.size == 0:
        raise ParameterError("densify_noise needs at least one noise point as the anchor")
    count = _count(amount, clustered.size, op)
    anchor = int(c.noise[0])
    distance = cdist(points.points[anchor : anchor + 1], points.points[clustered])[0]
    nearest = clustered[np.lexsort((clustered, distance))[:count]]
    labels[nearest] = NOISE_LABEL
    return Clustering(labels)
