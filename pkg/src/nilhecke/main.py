"""Main CLI entry point for nilhecke."""
from __future__ import annotations

import logging
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.progress import Progress
from rich.progress import SpinnerColumn
from rich.progress import TextColumn

from nilhecke import __version__
from nilhecke.config.settings import CurveConfig
from nilhecke.config.settings import RunConfig
from nilhecke.config.settings import load_curve_config
from nilhecke.config.settings import settings
from nilhecke.core.api import DEFAULT_LOCAL_EQUATIONS
from nilhecke.core.api import run_pipeline
from nilhecke.errors import ConfigError
from nilhecke.types import PipelineResult


# Initialize Typer app and Rich console
app = typer.Typer(
    name="nilhecke",
    help="Exact Hecke operators, constant terms and cuspidal kernels over nilpotent extensions of curves.",
    add_completion=False,
    rich_markup_mode="rich",
)
console = Console(soft_wrap=True, legacy_windows=False)

# shared options
CURVE = typer.Option(..., "--curve", "-c", help="Curve file (JSON or TOML)", metavar="FILE")
GAP = typer.Option(settings.window_gap, "--gap", "-B", help="Window gap B")
DET = typer.Option("0", "--det", help="Determinant label: 'd', 'd;P' or 'd;P;tau'")
PRECISION = typer.Option(settings.precision, "--precision", "-N", help="Local truncation N")
DMAX = typer.Option(settings.dmax, "--dmax", help="Largest stratum degree")
DIVISORS = typer.Option(
    [], "--divisor", "-d", help="Simple divisor 'place:f_c', e.g. '0:t+eps'; repeatable"
)
OUTPUT = typer.Option(None, "--output", "-o", help="Report path (JSON)", metavar="FILE")
SEED = typer.Option(settings.seed, "--seed", help="Seed for randomised checks")
NO_CACHE = typer.Option(False, "--no-cache", help="Do not read or write the window cache")
VERBOSE = typer.Option(False, "--verbose", "-v", help="Enable verbose output mode")


def version_callback(value: bool) -> None:
    """Show version information and exit."""
    if value:
        console.print(f"[bold blue]nilhecke[/bold blue] version [green]{__version__}[/green]")
        raise typer.Exit


@app.callback()
def main(
    version: Optional[bool] = typer.Option(  # noqa: UP007
        None,
        "--version",
        callback=version_callback,
        is_eager=True,
        help="Show version information and exit",
    ),
) -> None:
    """Verify Hecke commutation, constant terms and spectral decompositions exactly."""
    del version


def setup_logging(verbose: bool) -> None:
    """Route the package loggers through Rich."""
    logger = logging.getLogger("nilhecke")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=console, show_path=False, markup=False))
    logger.setLevel(logging.DEBUG if verbose or settings.verbose else settings.log_level.upper())
    logger.propagate = False


def build_config(curve_path: str | None, curve: CurveConfig | None = None, **fields: object) -> RunConfig:
    """A validated RunConfig; failures surface as ConfigError."""
    if curve is None and curve_path is not None:
        curve = load_curve_config(curve_path)
    try:
        return RunConfig(curve=curve, curve_path=curve_path, **fields)
    except ValidationError as e:
        msg = f"invalid run configuration: {e}"
        raise ConfigError(msg) from e


def print_verdicts(result: PipelineResult) -> None:
    for name, ok in result.verdicts().items():
        mark = "[green]✓[/green]" if ok else "[red]✗[/red]"
        console.print(f"{mark} {name}")
    if result.report_path:
        console.print(f"[dim]Report saved to: {result.report_path}[/dim]")


def execute(config: RunConfig, verbose: bool, no_cache: bool, matrix_dir: str | None = None) -> None:
    """Run the pipeline with a progress spinner and exit non-zero on any failed verdict."""
    setup_logging(verbose)
    console.print(
        Panel.fit(
            f"[bold blue]nilhecke[/bold blue] v{__version__}\n"
            f"stages: {', '.join(config.stages)}",
            border_style="blue",
        )
    )
    try:
        with Progress(
            SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console, transient=True
        ) as progress:
            task = progress.add_task("starting", total=None)
            result = run_pipeline(
                config,
                cache_dir=None if no_cache else settings.cache_dir,
                progress=lambda stage: progress.update(task, description=f"stage {stage}"),
                matrix_dir=matrix_dir,
            )
    except Exception as e:
        console.print(f"[red]✗[/red] [red]Error:[/red] {e}")
        if verbose:
            console.print_exception()
        raise typer.Exit(1)

    print_verdicts(result)
    if not result.ok:
        console.print("[red]✗[/red] Some verdicts failed!")
        raise typer.Exit(1)
    console.print("[green]✓[/green] All verdicts passed")


def _config_or_exit(verbose: bool, **kwargs: object) -> RunConfig:
    try:
        return build_config(**kwargs)  # type: ignore[arg-type]
    except ConfigError as e:
        console.print(f"[red]✗[/red] [red]Config error:[/red] {e}")
        if verbose:
            console.print_exception()
        raise typer.Exit(1)


@app.command("local-commute")
def local_commute(
    q: int = typer.Option(3, "--q", "-q", help="Residue field order"),
    precision: int = typer.Option(10, "--precision", "-N", help="Local truncation N"),
    fc: list[str] = typer.Option(
        DEFAULT_LOCAL_EQUATIONS, "--fc", help="Local equation, e.g. 't+eps'; repeatable"
    ),
    output: Optional[str] = OUTPUT,  # noqa: UP007
    verbose: bool = VERBOSE,
) -> None:
    """Check that local Hecke elements of simple divisors commute.

    Examples:
        nilhecke local-commute --q 3 --fc t --fc t+eps
    """
    config = _config_or_exit(
        verbose,
        curve_path=None,
        curve=CurveConfig(type="p1", q=q),
        precision=precision,
        divisors=[f"0:{f}" for f in fc],
        stages=["local-commute"],
        output=output,
    )
    execute(config, verbose, no_cache=True)


@app.command()
def enumerate(  # noqa: A001
    curve: str = CURVE,
    gap: int = GAP,
    det: str = DET,
    precision: int = PRECISION,
    output: Optional[str] = OUTPUT,  # noqa: UP007
    no_cache: bool = NO_CACHE,
    verbose: bool = VERBOSE,
) -> None:
    """List the bundle classes of a window and check their masses."""
    config = _config_or_exit(
        verbose, curve_path=curve, gap=gap, det=det, precision=precision, stages=["enumerate"], output=output
    )
    execute(config, verbose, no_cache)


@app.command()
def hecke(
    curve: str = CURVE,
    gap: int = GAP,
    det: str = DET,
    precision: int = PRECISION,
    divisor: list[str] = DIVISORS,
    matrices: Optional[str] = typer.Option(  # noqa: UP007
        None, "--matrices", help="Directory for CSV exports of the matrices", metavar="DIR"
    ),
    output: Optional[str] = OUTPUT,  # noqa: UP007
    no_cache: bool = NO_CACHE,
    verbose: bool = VERBOSE,
) -> None:
    """Build Hecke matrices on a window and compare their products."""
    config = _config_or_exit(
        verbose,
        curve_path=curve,
        gap=gap,
        det=det,
        precision=precision,
        divisors=divisor,
        stages=["enumerate", "hecke"],
        output=output,
    )
    execute(config, verbose, no_cache, matrix_dir=matrices)


@app.command()
def cuspidal(
    curve: str = CURVE,
    gap: int = GAP,
    det: str = DET,
    precision: int = PRECISION,
    dmax: int = DMAX,
    divisor: list[str] = DIVISORS,
    output: Optional[str] = OUTPUT,  # noqa: UP007
    seed: int = SEED,
    no_cache: bool = NO_CACHE,
    verbose: bool = VERBOSE,
) -> None:
    """Compute the cuspidal kernel of a window and its certificates."""
    config = _config_or_exit(
        verbose,
        curve_path=curve,
        gap=gap,
        det=det,
        precision=precision,
        dmax=dmax,
        divisors=divisor,
        stages=["cuspidal"],
        output=output,
        seed=seed,
    )
    execute(config, verbose, no_cache)


@app.command()
def spectral(
    curve: str = CURVE,
    gap: int = GAP,
    det: str = DET,
    precision: int = PRECISION,
    dmax: int = DMAX,
    alpha: Optional[int] = typer.Option(None, "--alpha", help="Non-square constant of the Hitchin fiber"),  # noqa: UP007
    divisor: list[str] = DIVISORS,
    output: Optional[str] = OUTPUT,  # noqa: UP007
    seed: int = SEED,
    no_cache: bool = NO_CACHE,
    verbose: bool = VERBOSE,
) -> None:
    """Decompose the cuspidal kernel along orbit buckets; with --alpha, certify the eigenbasis."""
    config = _config_or_exit(
        verbose,
        curve_path=curve,
        gap=gap,
        det=det,
        precision=precision,
        dmax=dmax,
        alpha=alpha,
        divisors=divisor,
        stages=["cuspidal", "spectral"],
        output=output,
        seed=seed,
    )
    execute(config, verbose, no_cache)


@app.command()
def full(
    curve: str = CURVE,
    gap: int = GAP,
    det: str = DET,
    precision: int = PRECISION,
    dmax: int = DMAX,
    alpha: Optional[int] = typer.Option(None, "--alpha", help="Non-square constant of the Hitchin fiber"),  # noqa: UP007
    divisor: list[str] = DIVISORS,
    output: Optional[str] = OUTPUT,  # noqa: UP007
    seed: int = SEED,
    no_cache: bool = NO_CACHE,
    verbose: bool = VERBOSE,
) -> None:
    """Run every stage: enumerate, hecke, cuspidal and spectral."""
    config = _config_or_exit(
        verbose,
        curve_path=curve,
        gap=gap,
        det=det,
        precision=precision,
        dmax=dmax,
        alpha=alpha,
        divisors=divisor,
        stages=["enumerate", "hecke", "cuspidal", "spectral"],
        output=output,
        seed=seed,
    )
    execute(config, verbose, no_cache)


if __name__ == "__main__":
    app()
