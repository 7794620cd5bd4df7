"""Command-line interface for scoring, sweeps, ablations and correlation runs.

Machine-readable ``key=value`` summaries go to stdout. Tables, diagnostics
and logs go to stderr.
"""

import logging
import math
import sys
from collections.abc import Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Annotated

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from .config import settings
from .errors import DiscoError, LabelError, ParameterError
from .models import (
    NOISE_LABEL,
    Clustering,
    GeneratorKind,
    GeneratorSpec,
    PointSet,
    RampKind,
    RunConfig,
    StandardizeMode,
    SweepParameter,
)
from .services.datasets import load_csv, load_labels, save_csv, z_standardize
from .services.disco import noise_probe, pointwise_report, score
from .services.experiments import (
    DEFAULT_MIN_PTS,
    DEFAULT_RAMP_SPECS,
    run_ablation,
    run_correlation,
    run_sweep,
    validated,
)
from .services.generators import generate, parse_key_values, read_gen_config, spec_from_params

app = typer.Typer(help="DISCO density-based cluster validity index")
console = Console(stderr=True)
logger = logging.getLogger(__name__)

DataOpt = Annotated[Path | None, typer.Option("--data", "-d", help="CSV file with the points")]
LabelsOpt = Annotated[Path | None, typer.Option("--labels", help="Single-column label file")]
LabelColumnOpt = Annotated[
    str | None, typer.Option("--label-column", help="Label column name or 0-based position")
]
HeaderOpt = Annotated[bool, typer.Option("--header/--no-header", help="CSV has a header row")]
GeneratorOpt = Annotated[
    GeneratorKind | None, typer.Option("--generator", "-g", help="Generate the data instead")
]
ParamOpt = Annotated[
    list[str] | None, typer.Option("--param", "-p", help="Generator parameter key=value")
]
GenConfigOpt = Annotated[
    Path | None, typer.Option("--gen-config", help="File of generator key=value lines")
]
MuOpt = Annotated[int, typer.Option("--mu", help="Neighborhood size for core-distances")]
StandardizeOpt = Annotated[
    StandardizeMode, typer.Option("--standardize", help="Feature standardization")
]
SeedOpt = Annotated[int, typer.Option("--seed", help="Seed for generators and clusterers")]
OutOpt = Annotated[Path | None, typer.Option("--out", "-o", help="Write the table as CSV")]
ReferenceOpt = Annotated[
    Path | None, typer.Option("--reference-labels", help="Reference labels for ARI")
]
MinPtsOpt = Annotated[int, typer.Option("--min-pts", help="DBSCAN neighbor count (self included)")]


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
    quiet: bool = typer.Option(False, "--quiet", "-q", help="Warnings and errors only"),
) -> None:
    """Score clusterings with DISCO."""
    level = logging.INFO
    if verbose or settings.debug:
        level = logging.DEBUG
    elif quiet:
        level = logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


@contextmanager
def _guard() -> Iterator[None]:
    """Report DiscoError on stderr and exit with its code."""
    try:
        yield
    except DiscoError as e:
        console.print(f"[red]{type(e).__name__}: {e}[/red]")
        raise typer.Exit(e.exit_code) from e


def _spec(
    generator: GeneratorKind | None, params: list[str] | None, gen_config: Path | None, seed: int
) -> GeneratorSpec | None:
    if generator is None:
        if params or gen_config:
            raise ParameterError("--param and --gen-config need --generator")
        return None
    fields = read_gen_config(gen_config) if gen_config else {}
    fields.update(parse_key_values(params or []))
    return spec_from_params(generator, seed, fields)


def _read(config: RunConfig, has_header: bool = True) -> tuple[PointSet, Clustering | None]:
    """Points and labels of the configured source, before standardization."""
    if config.data is not None:
        ps, labels = load_csv(config.data, has_header=has_header, label_column=config.label_column)
    else:
        assert config.generator is not None
        ps, labels = generate(config.generator)
    if config.labels is not None:
        labels = load_labels(config.labels)
    if labels is not None:
        labels.check_size(ps.n)
    return ps, labels


def _load(config: RunConfig, has_header: bool = True) -> tuple[PointSet, Clustering | None]:
    ps, labels = _read(config, has_header)
    return z_standardize(ps, config.standardize), labels


def _require_labels(labels: Clustering | None) -> Clustering:
    if labels is None:
        raise LabelError("no labels given: use --labels, --label-column or --generator")
    return labels


def _numbers(text: str, option: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as e:
        raise ParameterError(f"{option} expects comma-separated numbers, got {text!r}") from e


def _write_table(frame: pd.DataFrame, path: Path) -> None:
    frame.to_csv(
        path, index=False, float_format=f"%.{settings.table_digits}g", lineterminator="\n"
    )
    console.print(f"[green]Wrote {len(frame)} rows to {path}[/green]")


def _show_table(title: str, frame: pd.DataFrame) -> None:
    table = Table(title=title)
    for column in frame.columns:
        table.add_column(str(column))
    for record in frame.itertuples(index=False):
        table.add_row(
            *[
                format(v, f".{settings.table_digits}g") if isinstance(v, float) else str(v)
                for v in record
            ]
        )
    console.print(table)


def _echo(**values: object) -> None:
    for key, value in values.items():
        typer.echo(f"{key}={value!r}" if isinstance(value, float) else f"{key}={value}")


@app.command("score")
def score_cmd(
    data: DataOpt = None,
    labels: LabelsOpt = None,
    label_column: LabelColumnOpt = None,
    header: HeaderOpt = True,
    generator: GeneratorOpt = None,
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    mu: MuOpt = settings.mu,
    standardize: StandardizeOpt = settings.standardize,
    pointwise: Path | None = typer.Option(None, "--pointwise", help="Write pointwise scores"),
    seed: SeedOpt = 0,
) -> None:
    """Score a labeling and print ``disco=<value>``."""
    with _guard():
        config = validated(
            RunConfig,
            command="score",
            data=data,
            generator=_spec(generator, param, gen_config, seed),
            labels=labels,
            label_column=label_column,
            mu=mu,
            standardize=standardize,
            pointwise=pointwise,
            seed=seed,
        )
        ps, clustering = _load(config, header)
        report = score(ps, _require_labels(clustering), mu=config.mu)
        _echo(
            disco=report.disco, n=ps.n, clusters=report.n_clusters, noise=report.n_noise, mu=mu
        )
        if report.mean_rho_sparse is not None:
            _echo(mean_rho_sparse=report.mean_rho_sparse, mean_rho_far=report.mean_rho_far)
        if config.pointwise is not None:
            _write_table(pointwise_report(report), config.pointwise)


@app.command("sweep")
def sweep_cmd(
    data: DataOpt = None,
    labels: LabelsOpt = None,
    label_column: LabelColumnOpt = None,
    header: HeaderOpt = True,
    generator: GeneratorOpt = None,
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    eps_list: str | None = typer.Option(None, "--eps-list", help="DBSCAN radii, e.g. 0.1,0.2"),
    k_list: str | None = typer.Option(None, "--k-list", help="k-means cluster counts"),
    min_pts: MinPtsOpt = DEFAULT_MIN_PTS,
    reference_labels: ReferenceOpt = None,
    mu: MuOpt = settings.mu,
    standardize: StandardizeOpt = settings.standardize,
    out: OutOpt = None,
    seed: SeedOpt = 0,
) -> None:
    """Run DBSCAN over an eps list or k-means over a k list and score every result.

    Labels given with the data (or generated) serve as the ARI reference
    unless --reference-labels overrides them.
    """
    with _guard():
        if (eps_list is None) == (k_list is None):
            raise ParameterError("give exactly one of --eps-list or --k-list")
        config = validated(
            RunConfig,
            command="sweep",
            data=data,
            generator=_spec(generator, param, gen_config, seed),
            labels=labels,
            label_column=label_column,
            mu=mu,
            standardize=standardize,
            out=out,
            seed=seed,
        )
        ps, reference = _load(config, header)
        if reference_labels is not None:
            reference = load_labels(reference_labels)
        parameter = SweepParameter.EPS if eps_list is not None else SweepParameter.K
        values = _numbers(eps_list or k_list or "", f"--{parameter.value}-list")
        result = run_sweep(
            ps, parameter, values, mu=mu, min_pts=min_pts, reference=reference, seed=seed
        )
        frame = pd.DataFrame([row.model_dump() for row in result.rows])
        frame = frame.rename(columns={"value": parameter.value})
        _show_table(f"{parameter.value} sweep", frame)
        best = result.best_row
        _echo(**{f"best_{parameter.value}": best.value})
        _echo(best_clusters=best.clusters, best_disco=best.disco)
        if result.pcc is not None:
            _echo(pcc=result.pcc)
        if config.out is not None:
            _write_table(frame, config.out)


@app.command("ablate")
def ablate_cmd(
    ramp: RampKind = typer.Option(..., "--ramp", "-r", help="Ramp to run"),
    values: str | None = typer.Option(None, "--values", help="Ramp values (default per ramp)"),
    data: DataOpt = None,
    labels: LabelsOpt = None,
    label_column: LabelColumnOpt = None,
    header: HeaderOpt = True,
    generator: GeneratorOpt = None,
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    mu: MuOpt = settings.mu,
    standardize: StandardizeOpt = settings.standardize,
    out: OutOpt = None,
    seed: SeedOpt = 0,
) -> None:
    """Score a dataset family along one ramp (swap, separation, jitter, noise, mu).

    Without --data or --generator the ramp's default generator runs. Every
    case is standardized with --standardize before scoring, as in ``score``.
    --labels and --label-column apply to --data only.
    """
    with _guard():
        if data is None and (labels is not None or label_column is not None):
            raise ParameterError("--labels and --label-column need --data")
        spec = _spec(generator, param, gen_config, seed)
        if spec is None and data is None:
            spec = DEFAULT_RAMP_SPECS[ramp].model_copy(update={"seed": seed})
        config = validated(
            RunConfig,
            command="ablate",
            data=data,
            generator=spec,
            labels=labels,
            label_column=label_column,
            mu=mu,
            standardize=standardize,
            out=out,
            seed=seed,
        )
        base = None
        if config.data is not None:
            ps, truth = _read(config, header)
            base = (ps, _require_labels(truth))
        result = run_ablation(
            ramp,
            values=_numbers(values, "--values") if values else None,
            mu=mu,
            seed=seed,
            spec=config.generator,
            base=base,
            standardize=config.standardize,
        )
        frame = pd.DataFrame([row.model_dump() for row in result.rows])
        _show_table(f"{ramp.value} ramp", frame)
        for row in result.rows:
            typer.echo(
                f"value={row.value!r} disco={row.disco!r} "
                f"rho_sparse={row.rho_sparse!r} rho_far={row.rho_far!r}"
            )
        if config.out is not None:
            _write_table(frame, config.out)


@app.command("generate")
def generate_cmd(
    generator: GeneratorKind = typer.Option(..., "--generator", "-g", help="Dataset family"),
    out: Path = typer.Option(..., "--out", "-o", help="CSV file to write"),
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    seed: SeedOpt = 0,
) -> None:
    """Write a synthetic dataset with a trailing ``label`` column."""
    with _guard():
        spec = _spec(generator, param, gen_config, seed)
        assert spec is not None
        ps, labels = generate(spec)
        save_csv(out, ps, labels)
        _echo(n=ps.n, m=ps.m, clusters=labels.k, noise=int(labels.noise.size), out=out)


@app.command("correlate")
def correlate_cmd(
    data: DataOpt = None,
    labels: LabelsOpt = None,
    label_column: LabelColumnOpt = None,
    header: HeaderOpt = True,
    generator: GeneratorOpt = None,
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    reference_labels: ReferenceOpt = None,
    eps_list: str | None = typer.Option(None, "--eps-list", help="DBSCAN radii"),
    k_list: str | None = typer.Option(None, "--k-list", help="k-means cluster counts"),
    min_pts: MinPtsOpt = DEFAULT_MIN_PTS,
    mu: MuOpt = settings.mu,
    standardize: StandardizeOpt = settings.standardize,
    out: OutOpt = None,
    seed: SeedOpt = 0,
) -> None:
    """Correlate DISCO with ARI over DBSCAN, k-means and random labelings."""
    with _guard():
        config = validated(
            RunConfig,
            command="correlate",
            data=data,
            generator=_spec(generator, param, gen_config, seed),
            labels=labels,
            label_column=label_column,
            mu=mu,
            standardize=standardize,
            out=out,
            seed=seed,
        )
        ps, reference = _load(config, header)
        if reference_labels is not None:
            reference = load_labels(reference_labels)
        k_values = [int(k) for k in _numbers(k_list, "--k-list")] if k_list else None
        result = run_correlation(
            ps,
            _require_labels(reference),
            mu=mu,
            min_pts=min_pts,
            eps_values=_numbers(eps_list, "--eps-list") if eps_list else None,
            k_values=k_values,
            seed=seed,
        )
        frame = pd.DataFrame([row.model_dump() for row in result.rows])
        _show_table("DISCO vs ARI", frame)
        _echo(clusterings=len(result.rows))
        if result.pcc is not None:
            _echo(pcc=result.pcc)
        if config.out is not None:
            _write_table(frame, config.out)


@app.command("probe")
def probe_cmd(
    data: DataOpt = None,
    labels: LabelsOpt = None,
    label_column: LabelColumnOpt = None,
    header: HeaderOpt = True,
    generator: GeneratorOpt = None,
    param: ParamOpt = None,
    gen_config: GenConfigOpt = None,
    mu: MuOpt = settings.mu,
    standardize: StandardizeOpt = settings.standardize,
    out: OutOpt = None,
    seed: SeedOpt = 0,
) -> None:
    """Compare actual noise scores with those of cluster points relabeled as noise."""
    with _guard():
        config = validated(
            RunConfig,
            command="probe",
            data=data,
            generator=_spec(generator, param, gen_config, seed),
            labels=labels,
            label_column=label_column,
            mu=mu,
            standardize=standardize,
            out=out,
            seed=seed,
        )
        ps, clustering = _load(config, header)
        clustering = _require_labels(clustering)
        frame = noise_probe(ps, clustering, mu=mu)
        report = score(ps, clustering, mu=mu)
        _echo(probed=len(frame))
        if len(frame):
            _echo(probe_mean=float(frame["rho_noise"].mean()))
        if report.n_noise and report.n_clusters:
            noise_values = [p.value for p in report.point_scores if p.label == NOISE_LABEL]
            _echo(noise_mean=math.fsum(noise_values) / len(noise_values))
        if config.out is not None:
            _write_table(frame, config.out)


@app.command("config")
def config_cmd() -> None:
    """Show current configuration."""
    console.print("\n[bold]Configuration[/bold]")
    console.print(f"  mu: {settings.mu}")
    console.print(f"  Standardize: {settings.standardize.value}")
    console.print(f"  Threads: {settings.threads or 'auto'} ({settings.worker_count()} workers)")
    console.print(f"  Row block size: {settings.row_block_size}")
    console.print(f"  Kruskal max edges: {settings.kruskal_max_edges}")
    console.print(f"  Table digits: {settings.table_digits}")
    console.print(f"  Debug: {settings.debug}")
    console.print(f"  Benchmark dir: {settings.benchmark_dir or 'not set'}")
    for key, value in settings.model_dump(mode="json").items():
        typer.echo(f"{key}={value}")
