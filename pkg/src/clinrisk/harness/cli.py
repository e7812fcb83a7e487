"""``clinrisk`` command line.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 when a run fails or
a report cannot be produced.
"""

import importlib
import logging
import sys
from dataclasses import replace
from enum import Enum
from pathlib import Path
from types import ModuleType
from typing import Annotated, Optional

import typer

from clinrisk.data.dataset import DatasetError, NoiseSpec
from clinrisk.data.ingest import dump_csv, ingest_csv
from clinrisk.data.noise import inject_symmetric_noise
from clinrisk.data.synthetic import PRESETS, SyntheticSpec, generate_synthetic
from clinrisk.harness import reports, store
from clinrisk.harness.config import ConfigError, load_config, load_matrix
from clinrisk.harness.runner import run_matrix, run_single
from clinrisk.utils.logging_config import configure_logging
from clinrisk.utils.streams import check_seed

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILURE = 2

app = typer.Typer(
    name="clinrisk",
    help="Noisy-label training under clinical risk.",
    add_completion=False,
    no_args_is_help=True,
)

ConfigOption = Annotated[Path, typer.Option("--config", help="TOML experiment config.")]
OutOption = Annotated[Path, typer.Option("--out", help="Output path.")]
SeedOption = Annotated[
    Optional[int], typer.Option("--seed", help="Override the 64-bit data/noise seed.")
]


class ReportKind(str, Enum):
    table = "table"
    tradeoff = "tradeoff"
    noise_impact = "noise-impact"
    sweep = "sweep"
    risk = "risk"


def _seed(seed: Optional[int]) -> Optional[int]:
    if seed is None:
        return None
    try:
        return check_seed(seed)
    except (TypeError, ValueError) as e:
        raise ConfigError(str(e)) from e


@app.callback()
def _setup(
    log_level: Annotated[str, typer.Option(help="Log level of the clinrisk loggers.")] = "WARNING",
    log_file: Annotated[Optional[Path], typer.Option(help="Also write logs here.")] = None,
) -> None:
    configure_logging(log_level, None if log_file is None else str(log_file))


@app.command()
def generate(
    out: Annotated[Path, typer.Option("--out", help="Directory for train/val/test CSVs.")],
    preset: Annotated[str, typer.Option(help=f"One of {', '.join(PRESETS)}.")] = "derma",
    config: Annotated[
        Optional[Path], typer.Option("--config", help="Take the [data] table from a config.")
    ] = None,
    seed: SeedOption = None,
) -> None:
    """Write synthetic train/val/test splits as CSV."""
    if config is not None:
        experiment = load_config(config)
        if not isinstance(experiment.data, SyntheticSpec):
            raise ConfigError(f"{config} does not describe synthetic data")
        spec = replace(experiment.data, seed=experiment.seed)
    elif preset in PRESETS:
        spec = PRESETS[preset]()
    else:
        raise ConfigError(f"Unknown preset {preset!r}; expected one of {', '.join(PRESETS)}")
    if seed is not None:
        spec = replace(spec, seed=_seed(seed))
    try:
        spec.validate()
    except ValueError as e:
        raise ConfigError(str(e)) from e
    out.mkdir(parents=True, exist_ok=True)
    for dataset in generate_synthetic(spec):
        dump_csv(dataset, out / f"{dataset.split_tag}.csv")
    typer.echo(f"Wrote train/val/test splits to {out}")


@app.command("inject-noise")
def inject_noise(
    in_path: Annotated[Path, typer.Option("--in", help="Training split CSV.")],
    out: OutOption,
    rate: Annotated[float, typer.Option(help="Symmetric noise rate in [0, 1].")],
    seed: SeedOption = None,
    label_column: Annotated[str, typer.Option(help="Observed label column.")] = "label",
) -> None:
    """Corrupt the labels of a training split."""
    if not 0.0 <= rate <= 1.0:
        raise ConfigError(f"Noise rate must lie in [0, 1], got {rate}")
    dataset = ingest_csv(in_path, label_column)
    noisy = inject_symmetric_noise(dataset, NoiseSpec(rate, _seed(seed) or 0))
    dump_csv(noisy, out, label_column)
    typer.echo(f"Flipped {int(noisy.flip_mask.sum())} of {noisy.n_samples} labels")


@app.command()
def run(config: ConfigOption, out: OutOption, seed: SeedOption = None) -> None:
    """Train and evaluate a single configuration."""
    experiment = load_config(config)
    if seed is not None:
        experiment = replace(experiment, seed=_seed(seed))
    result = run_single(experiment)
    store.persist([result], out)
    if not result.ok:
        typer.echo(f"Run failed: {result.error}", err=True)
        raise typer.Exit(EXIT_FAILURE)
    bac = result.metrics.bac
    typer.echo(
        f"Run {result.fingerprint} finished: bac={reports.NA if bac is None else f'{bac:.3f}'}"
    )


@app.command()
def matrix(
    config: ConfigOption,
    out: OutOption,
    parallel: Annotated[
        Optional[int], typer.Option("--parallel", min=1, help="Worker processes.")
    ] = None,
    seed: Annotated[
        Optional[int], typer.Option("--seed", help="Override the base seed of the matrix.")
    ] = None,
    wall_clock: Annotated[
        bool, typer.Option(help="Record run durations (disable for byte-stable output).")
    ] = True,
) -> None:
    """Run the method x noise x seed matrix of a configuration."""
    base, spec = load_matrix(config)
    if seed is not None:
        base = replace(base, seed=_seed(seed))
    results = run_matrix(
        base,
        spec.methods,
        spec.noise_rates,
        spec.seeds,
        parallelism=parallel or spec.parallelism,
    )
    store.persist(results, out, include_wall_clock=wall_clock)
    failed = [r for r in results if not r.ok]
    typer.echo(f"{len(results) - len(failed)} of {len(results)} runs finished")
    if failed:
        for result in failed:
            typer.echo(f"{result.label} eta={result.noise_rate:g}: {result.error}", err=True)
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def report(
    in_path: Annotated[Path, typer.Option("--in", help="JSONL results file.")],
    kind: Annotated[ReportKind, typer.Option(help="Report to emit.")] = ReportKind.table,
    out: Annotated[
        Optional[Path], typer.Option("--out", help="CSV output (tradeoff, noise-impact).")
    ] = None,
    scenario: Annotated[str, typer.Option(help="Risk scenario name.")] = "risk_II",
    method: Annotated[
        Optional[str], typer.Option(help="Only use runs of this method label, e.g. unicon+CS.")
    ] = None,
) -> None:
    """Emit a table, trade-off data or noise-impact report from a results file."""
    results = store.load(in_path)
    if method is not None:
        results = [r for r in results if r.label.lower() == method.lower()]
        if not results:
            raise reports.ReportError(f"No runs of {method} in {in_path}")

    if kind is ReportKind.table:
        typer.echo(reports.emit_method_table(results), nl=False)
    elif kind is ReportKind.sweep:
        typer.echo(reports.emit_sweep_report(results), nl=False)
    elif kind is ReportKind.risk:
        typer.echo(reports.emit_risk_report(results, scenario), nl=False)
    elif kind is ReportKind.tradeoff:
        data = reports.emit_tradeoff_data(results, scenario)
        if out is None:
            typer.echo(data.csv, nl=False)
            return
        out.write_text(data.csv, encoding="utf-8")
        if data.svg is None:
            typer.echo(f"No defined {scenario} values; SVG omitted", err=True)
        else:
            out.with_suffix(".svg").write_text(data.svg, encoding="utf-8")
        typer.echo(f"Wrote {data.n_points} trade-off points to {out}")
    else:
        impact = reports.emit_noise_impact_report(results, scenario)
        typer.echo(impact.text, nl=False)
        if out is not None:
            out.write_text(impact.csv, encoding="utf-8")


def click_exceptions(command) -> ModuleType:
    """Exception module of the click build ``command`` was made from.

    Some typer releases vendor click, so the classes ``command`` raises need not be
    the ones of an importable ``click``.
    """
    for cls in type(command).__mro__:
        package, _, module = cls.__module__.rpartition(".")
        if module == "core" and cls.__name__ == "Command":
            return importlib.import_module(f"{package}.exceptions")
    raise TypeError(f"{type(command).__name__} is not a click command")


def main(argv: Optional[list[str]] = None) -> int:
    """Run the command line and return its exit code."""
    command = typer.main.get_command(app)
    errors = click_exceptions(command)
    try:
        code = command.main(
            args=sys.argv[1:] if argv is None else list(argv),
            prog_name="clinrisk",
            standalone_mode=False,
        )
    except errors.UsageError as e:
        e.show()
        return EXIT_CONFIG
    except errors.Abort:
        typer.echo("Aborted", err=True)
        return EXIT_FAILURE
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        typer.echo(f"Configuration error: {e}", err=True)
        return EXIT_CONFIG
    except (reports.ReportError, store.ResultsFormatError, DatasetError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        typer.echo(f"Error: {e}", err=True)
        return EXIT_FAILURE
    return code if isinstance(code, int) else EXIT_OK


__doc_title__ = "Command Line"
__all__ = ["app", "main", "EXIT_OK", "EXIT_CONFIG", "EXIT_FAILURE"]
