#!/usr/bin/env python3
"""
kmjack command line: single-dataset estimation and the simulation studies
"""

import logging
import os
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Optional

import typer
from rich.console import Console
from rich.markup import escape
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn
from rich.table import Table

from kmjack import __version__
from kmjack.errors import ConfigurationError, KmJackError, NumericalError
from kmjack.experiments import (
    Estimator,
    StudyKind,
    emit_tables,
    load_config,
)
from kmjack.imputation import ImputationMethod, build_imputer
from kmjack.io import read_dataset
from kmjack.jackknife import corrected_estimate, modified_estimates
from kmjack.messaging import CellFinishedMessage, StudyMessage, StudyStartedMessage
from kmjack.settings import DEFAULT_OUT_DIR, DEFAULT_SEED, DEFAULT_THREADS
from kmjack.simgen import (
    SKEWED_STUDY,
    AftDesign,
    CensorFamily,
    calibrate_aft_censoring,
    calibrate_censoring,
    resolve_skewed,
)
from kmjack.simgen.generators import KOZIOL_GREEN_LIFETIME
from paths import get_path

from .study_service import StudyService

EXIT_USAGE = 2
EXIT_NUMERICAL = 3

console = Console()
error_console = Console(stderr=True)

app = typer.Typer(help="Jackknife bias correction of Kaplan-Meier mean lifetime estimates")


def _setup_file_logging() -> None:
    os.makedirs("logs", exist_ok=True)

    # Clear any existing log file
    log_file = "logs/kmjack.log"
    with open(log_file, "w") as f:
        f.write("")

    # Silence numerical library chatter
    logging.getLogger("matplotlib").setLevel(logging.CRITICAL)
    logging.getLogger("numexpr").setLevel(logging.CRITICAL)

    # Set root logger to WARNING to suppress most noise
    logging.basicConfig(level=logging.WARNING, format="%(message)s", handlers=[], force=True)

    kmjack_logger = logging.getLogger("kmjack")
    kmjack_logger.setLevel(logging.DEBUG)
    kmjack_logger.propagate = False
    kmjack_logger.handlers.clear()

    handler = logging.FileHandler(log_file)
    handler.setFormatter(logging.Formatter("%(asctime)s - %(name)s - %(message)s"))
    kmjack_logger.addHandler(handler)


@app.callback(invoke_without_command=True)
def main(
    ctx: typer.Context,
    version: bool = typer.Option(False, "--version", "-v"),
    debug: bool = typer.Option(False, "--log", "-l", help="Write debug logs to logs/kmjack.log"),
):
    """kmjack"""
    if version:
        typer.echo(f"kmjack v{__version__}")
        raise typer.Exit()

    if debug:
        _setup_file_logging()

    if ctx.invoked_subcommand is None:
        typer.echo(ctx.get_help())


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Map library errors onto the stable exit codes."""
    try:
        yield
    except NumericalError as e:
        error_console.print(f"[red]numerical failure:[/red] {escape(str(e))}")
        raise typer.Exit(code=EXIT_NUMERICAL)
    except (KmJackError, OSError) as e:
        error_console.print(f"[red]error:[/red] {escape(str(e))}")
        raise typer.Exit(code=EXIT_USAGE)


def _method(
    name: Optional[str], gap_fraction: float, resamples: int, seed: Optional[int]
) -> Optional[ImputationMethod]:
    if name is None:
        return None
    return ImputationMethod(name, resample_count=resamples, gap_fraction=gap_fraction, seed=seed)


def _fmt(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.6f}"


@app.command()
def estimate(
    dataset: Path = typer.Argument(..., help="CSV with time,status (or x1..xp,time,status) rows"),
    impute: Optional[str] = typer.Option(
        None, "--impute", "-i", help="Imputation for a censored largest datum (e.g. w_nu, efron, w_tau_star_m)"
    ),
    gap_fraction: float = typer.Option(0.25, help="Upper fraction of the sample used by w_nu"),
    resamples: int = typer.Option(100, help="Bootstrap resamples for the resampled AFT methods"),
    seed: int = typer.Option(DEFAULT_SEED, help="Seed for resampling"),
    reclassify: bool = typer.Option(True, help="Count the imputed datum as an event inside the last weight"),
):
    """K-M mean lifetime, its jackknife bias and the corrected estimate."""
    with _exit_codes():
        data = read_dataset(dataset)
        s = data.sample
        original = corrected_estimate(s)
        method = _method(impute, gap_fraction, resamples, seed)
        modified = None
        if s.statuses[-1] == 0 and method is not None:
            imputer = build_imputer(method, covariates=data.covariates)
            modified = modified_estimates(s, imputer(s), reclassify=reclassify)

    table = Table(title=f"{dataset.name}: n={s.n}, case (d(n-1), d(n)) = {s.case}")
    table.add_column("quantity")
    table.add_column("value", justify="right")
    table.add_row("S_hat", _fmt(original.s_hat))
    table.add_row("bias", _fmt(original.bias))
    table.add_row("S_tilde", _fmt(original.s_tilde))
    if modified is not None:
        table.add_row("imputation", modified.method_tag)
        table.add_row("imputed Y(n)", _fmt(modified.imputed_time))
        table.add_row("S_hat_star", _fmt(modified.s_hat))
        table.add_row("bias_star", _fmt(modified.bias))
        table.add_row("S_tilde_star", _fmt(modified.s_tilde))
    console.print(table)
    if s.statuses[-1] == 0 and modified is None:
        console.print("largest datum censored: pass --impute for the modified estimator")


@app.command("impute")
def impute_command(
    dataset: Path = typer.Argument(..., help="CSV dataset whose largest datum is censored"),
    method: str = typer.Option("w_nu", "--method", "-m", help="Imputation method"),
    gap_fraction: float = typer.Option(0.25, help="Upper fraction of the sample used by w_nu"),
    resamples: int = typer.Option(100, help="Bootstrap resamples for the resampled AFT methods"),
    seed: int = typer.Option(DEFAULT_SEED, help="Seed for resampling"),
):
    """Print the imputed value of a censored largest observation."""
    with _exit_codes():
        data = read_dataset(dataset)
        imputer = build_imputer(_method(method, gap_fraction, resamples, seed), covariates=data.covariates)
        imputed = imputer(data.sample)
    typer.echo(f"{imputed.imputed_time:.10g}")


def _render(messages: Iterator[StudyMessage]) -> None:
    columns = (
        TextColumn("{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
    )
    with Progress(*columns, console=error_console, transient=True) as progress:
        task = None
        for message in messages:
            match message:
                case StudyStartedMessage():
                    task = progress.add_task(
                        f"{message.study} / {message.distribution}", total=message.cell_count
                    )
                case CellFinishedMessage():
                    if task is not None:
                        progress.advance(task)
                    progress.console.print(
                        f"n={message.n:<4} p={message.p_percent:>2}%  "
                        f"censored={message.censoring_fraction:.3f}  ({message.elapsed_s:.1f}s)"
                    )


def _run_study(
    kind: StudyKind,
    config_path: Optional[Path],
    seed: Optional[int],
    threads: int,
    out: Path,
    replications: Optional[int],
    distributions: Optional[list[str]] = None,
) -> None:
    with _exit_codes():
        config = load_config(config_path or get_path("configs", f"{kind.value}_study.toml"))
        if config.study is not kind:
            raise ConfigurationError(
                f"config {config.source} describes a {config.study.value} study, not {kind.value}"
            )
        config = config.with_overrides(
            seed=seed,
            replications=replications,
            distributions=tuple(d.lower() for d in distributions) if distributions else None,
        )

        service = StudyService(config, threads=threads)
        _render(service.run())

        multiple = len(service.results) > 1
        for result in service.results:
            directory = out / result.distribution if multiple else out
            emit_tables(result, directory)
            _print_result(result, directory)


def _print_result(result, directory: Path) -> None:
    table = Table(title=f"{result.distribution}: mean bias (true mean {result.true_mean:.4f})")
    table.add_column("p%", justify="right")
    table.add_column("n", justify="right")
    for estimator in Estimator:
        table.add_column(estimator.value, justify="right")
    for n in result.config.n_list:
        for p in result.config.p_list:
            row = [f"{result.summary(e, n, p).mean_bias:+.3f}" for e in Estimator]
            table.add_row(str(p), str(n), *row)
    console.print(table)
    console.print(f"results written to {directory}")


_SEED = typer.Option(None, "--seed", "-s", help="Master seed (overrides the config)")
_THREADS = typer.Option(DEFAULT_THREADS, "--threads", "-t", min=1, help="Worker threads")
_OUT = typer.Option(Path(DEFAULT_OUT_DIR), "--out", "-o", help="Output directory")
_CONFIG = typer.Option(None, "--config", "-c", help="Study config (TOML, JSON or JSON5)")
_REPLICATIONS = typer.Option(None, "--replications", "-r", min=1, help="Replications per cell")


@app.command("kg-study")
def kg_study(
    config: Optional[Path] = _CONFIG,
    seed: Optional[int] = _SEED,
    threads: int = _THREADS,
    out: Path = _OUT,
    replications: Optional[int] = _REPLICATIONS,
):
    """Koziol-Green study: exponential lifetimes and censoring."""
    _run_study(StudyKind.KG, config, seed, threads, out, replications)


@app.command("dist-study")
def dist_study(
    config: Optional[Path] = _CONFIG,
    seed: Optional[int] = _SEED,
    threads: int = _THREADS,
    out: Path = _OUT,
    replications: Optional[int] = _REPLICATIONS,
    distribution: Optional[list[str]] = typer.Option(
        None, "--distribution", "-d", help=f"Restrict to these of {list(SKEWED_STUDY)}"
    ),
):
    """Skewed lifetime distributions with paired censoring families."""
    _run_study(StudyKind.DIST, config, seed, threads, out, replications, distribution)


@app.command("aft-study")
def aft_study(
    config: Optional[Path] = _CONFIG,
    seed: Optional[int] = _SEED,
    threads: int = _THREADS,
    out: Path = _OUT,
    replications: Optional[int] = _REPLICATIONS,
):
    """Log-normal AFT regression study with covariate-based imputation."""
    _run_study(StudyKind.AFT, config, seed, threads, out, replications)


@app.command()
def calibrate(
    distribution: str = typer.Argument(
        ..., help=f"koziol_green, aft or one of {list(SKEWED_STUDY)}"
    ),
    p: float = typer.Argument(..., help="Target censoring probability in (0, 1)"),
    censoring: Optional[str] = typer.Option(
        None, "--censoring", help="Censoring family for a skewed lifetime (exponential, uniform_a2a)"
    ),
    alpha: float = typer.Option(0.0, help="AFT intercept"),
):
    """Print the censoring parameter (lambda or a) that attains probability p."""
    with _exit_codes():
        name = distribution.strip().lower()
        if name == "koziol_green":
            value = calibrate_censoring(KOZIOL_GREEN_LIFETIME, CensorFamily.EXPONENTIAL, p)
        elif name == "aft":
            value = calibrate_aft_censoring(AftDesign(alpha=alpha), p)
        else:
            lifetime, family = resolve_skewed(name)
            if censoring is not None:
                try:
                    family = CensorFamily(censoring.strip().lower())
                except ValueError:
                    raise ConfigurationError(
                        f"Unknown censoring family '{censoring}'. "
                        f"Valid options: {[f.value for f in CensorFamily]}"
                    )
            value = calibrate_censoring(lifetime, family, p)
    typer.echo(f"{value:.10g}")


if __name__ == "__main__":
    app()
