import logging
import sys
from pathlib import Path
from typing import Callable, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from . import config
from .assembly.mesh import BoundaryCondition
from .errors import ArrowheadError, InvalidParameterError
from .frontends.burgers import DEFAULT_DT, DEFAULT_VISCOSITY
from .frontends.pcg import PcgConfig
from .models import Command, ExperimentSpec, InitialCondition, Manufactured
from .service import (
    run_burgers,
    run_pcg_table,
    run_scaling1d,
    run_scaling2d,
    run_solve1d,
    run_solve2d,
    run_spectrum_check,
)
from .utils.output import read_grid_csv, write_rows


app = typer.Typer(help="Arrowhead: sparse hp-FEM solves with reverse Cholesky, ADI and fast transforms")
console = Console()
err_console = Console(stderr=True)

_state = {"seed": 0}

OutOption = typer.Option(None, "--out", help="CSV destination (default: stdout)")
TimingsOption = typer.Option(True, "--timings/--no-timings", help="Measure timings; off writes 0 for reproducible output")
BreakpointsOption = typer.Option(None, "--breakpoints", help="Comma-separated mesh breakpoints; overrides --n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected a comma-separated list of integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise typer.BadParameter(f"expected a comma-separated list of numbers, got {text!r}") from None


def _mesh(n: int, breakpoints: Optional[str]) -> dict:
    if breakpoints is None:
        return {"n": n}
    points = _float_list(breakpoints)
    return {"n": max(len(points) - 1, 1), "breakpoints": points}


def _spec(command: Command, **fields) -> ExperimentSpec:
    try:
        return ExperimentSpec(command=command, seed=_state["seed"], **fields)
    except ValidationError as e:
        msgs = "; ".join(f"{'.'.join(map(str, err['loc'])) or 'options'}: {err['msg']}" for err in e.errors())
        raise typer.BadParameter(msgs) from None


def _run(produce: Callable[[], list], out: Optional[Path], title: str) -> None:
    """Run a driver, map its failures to CLI errors, write the CSV and print a summary table."""
    try:
        rows = produce()
    except InvalidParameterError as e:
        raise typer.BadParameter(str(e)) from None
    except ArrowheadError as e:
        err_console.print(f"[bold red]{type(e).__name__}:[/] {e}")
        raise typer.Exit(code=1)
    except ValueError as e:
        raise typer.BadParameter(str(e)) from None

    if out is None:
        sys.stdout.write(write_rows(rows))
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        with out.open("w", newline="") as fh:
            write_rows(rows, fh)
        console.print(f"Wrote {len(rows)} rows to {out}", style="bold green")

    table = Table(title=title)
    for col in ("N", "time_factor_s", "time_solve_s", "iters", "error"):
        table.add_column(col, justify="right")
    for r in rows:
        table.add_row(r["N"], r["time_factor_s"], r["time_solve_s"], r["iters"], r["error"])
    err_console.print(table)


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("{task.description}"),
        BarColumn(),
        TextColumn("{task.completed}/{task.total}"),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    )


@app.callback()
def main(
    threads: Optional[int] = typer.Option(None, help="Numba thread count (default: ARROWHEAD_THREADS or numba's own)"),
    seed: int = typer.Option(0, help="Seed for randomised inputs"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log progress at INFO level"),
    debug: bool = typer.Option(False, help="Log at DEBUG level and verify ADI residuals"),
):
    """Global options shared by every command."""
    level = logging.DEBUG if debug else logging.INFO if verbose else logging.WARNING
    logging.basicConfig(
        level=level, format="%(message)s", handlers=[RichHandler(console=err_console, show_path=False)], force=True
    )
    if debug:
        config.DEBUG = True
    try:
        used = config.set_threads(threads)
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--threads") from None
    logging.getLogger(__name__).info("using %d threads", used)
    _state["seed"] = seed


@app.command()
def solve1d(
    n: int = typer.Option(4, help="Number of uniform elements on [-1, 1]"),
    p: int = typer.Option(16, help="Polynomial degree"),
    omega: float = typer.Option(0.0, help="Screening parameter"),
    bc: BoundaryCondition = typer.Option(BoundaryCondition.DIRICHLET.value, help="Boundary condition"),
    breakpoints: Optional[str] = BreakpointsOption,
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """Solve -u'' + omega^2 u = f for a manufactured solution with one reverse Cholesky factorisation."""
    spec = _spec(Command.SOLVE1D, **_mesh(n, breakpoints), degree=p, omega=omega, bc=bc, timings=timings, out=out)
    _run(lambda: run_solve1d(spec), out, "solve1d")


@app.command()
def scaling1d(
    n: str = typer.Option("8", help="Comma-separated element counts"),
    p_max: int = typer.Option(1024, help="Largest degree; degrees double from 2"),
    omega: float = typer.Option(0.0, help="Screening parameter"),
    bc: BoundaryCondition = typer.Option(BoundaryCondition.DIRICHLET.value, help="Boundary condition"),
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """Factor and solve timings of the 1D problem as the degree grows."""
    elements = _int_list(n)
    if not elements or p_max < 2:
        raise typer.BadParameter("need at least one element count and --p-max >= 2")
    spec = _spec(Command.SCALING1D, n=elements[0], omega=omega, bc=bc, timings=timings, out=out)
    with _progress() as progress:
        task = progress.add_task("[cyan]scaling1d", total=len(elements) * (p_max.bit_length() - 1))
        _run(lambda: run_scaling1d(spec, elements, p_max, lambda: progress.advance(task)), out, "scaling1d")


@app.command()
def solve2d(
    n: int = typer.Option(2, help="Elements per axis on [-1, 1]^2"),
    p: int = typer.Option(20, help="Polynomial degree per axis"),
    omega: float = typer.Option(0.0, help="Screening parameter"),
    eps: float = typer.Option(1e-10, help="ADI tolerance"),
    bc: BoundaryCondition = typer.Option(BoundaryCondition.DIRICHLET.value, help="Boundary condition on every side"),
    manufactured: Manufactured = typer.Option(Manufactured.SIN.value, help="Built-in right-hand side"),
    rhs_csv: Optional[Path] = typer.Option(None, help="Right-hand side values on the transform grid (CSV)"),
    breakpoints: Optional[str] = BreakpointsOption,
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """Solve -Laplace(u) + omega^2 u = f on a square with the ADI method."""
    spec = _spec(
        Command.SOLVE2D, **_mesh(n, breakpoints), degree=p, omega=omega, eps=eps, bc=bc, timings=timings, out=out
    )
    grid = None
    if rhs_csv is not None:
        try:
            grid = read_grid_csv(rhs_csv)
        except (OSError, ValueError) as e:
            raise typer.BadParameter(str(e), param_hint="--rhs-csv") from None
    _run(lambda: run_solve2d(spec, manufactured, grid), out, "solve2d")


@app.command()
def scaling2d(
    n: int = typer.Option(2, help="Elements per axis"),
    p_max: int = typer.Option(64, help="Largest degree; degrees double from 4"),
    omega: float = typer.Option(0.0, help="Screening parameter"),
    eps: float = typer.Option(1e-10, help="ADI tolerance"),
    bc: BoundaryCondition = typer.Option(BoundaryCondition.DIRICHLET.value, help="Boundary condition on every side"),
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """ADI plan and solve timings of the manufactured 2D problem as the degree grows."""
    if p_max < 4:
        raise typer.BadParameter("--p-max must be at least 4")
    spec = _spec(Command.SCALING2D, n=n, omega=omega, eps=eps, bc=bc, timings=timings, out=out)
    with _progress() as progress:
        task = progress.add_task("[cyan]scaling2d", total=p_max.bit_length() - 2)
        _run(lambda: run_scaling2d(spec, p_max, lambda: progress.advance(task)), out, "scaling2d")


@app.command()
def burgers(
    n: int = typer.Option(9, help="Elements per axis on [-1, 1]^2"),
    p: int = typer.Option(12, help="Polynomial degree per axis"),
    steps: int = typer.Option(10, help="Number of time steps"),
    dt: float = typer.Option(DEFAULT_DT, help="Time step"),
    eps: float = typer.Option(DEFAULT_VISCOSITY, help="Viscosity"),
    adi_eps: float = typer.Option(1e-10, help="ADI tolerance of the heat step"),
    initial: InitialCondition = typer.Option(InitialCondition.INDICATOR.value, help="Initial condition"),
    breakpoints: Optional[str] = BreakpointsOption,
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """Step the viscous Burgers equation with zero Dirichlet data."""
    spec = _spec(Command.BURGERS, **_mesh(n, breakpoints), degree=p, eps=adi_eps, timings=timings, out=out)
    with _progress() as progress:
        task = progress.add_task("[magenta]steps", total=steps)
        _run(
            lambda: run_burgers(spec, steps, dt, eps, initial, lambda: progress.advance(task)),
            out, "burgers",
        )


@app.command("pcg-table")
def pcg_table(
    m: str = typer.Option("1,2,3", help="Comma-separated grading depths"),
    p: str = typer.Option("8,16,32", help="Comma-separated polynomial degrees"),
    rel_tol: float = typer.Option(1e-8, help="Relative residual tolerance"),
    precond_tol: float = typer.Option(1e-4, help="ADI tolerance of the preconditioner"),
    max_iter: int = typer.Option(500, help="Iteration cap"),
    out: Optional[Path] = OutOption,
    timings: bool = TimingsOption,
):
    """PCG iteration counts for (-Laplace - 10 log|x|) u = 1 on graded meshes."""
    ms, ps = _int_list(m), _int_list(p)
    try:
        cfg = PcgConfig(rel_tol=rel_tol, max_iter=max_iter, precond_tol=precond_tol)
    except ValueError as e:
        raise typer.BadParameter(str(e)) from None
    with _progress() as progress:
        task = progress.add_task("[cyan]graded problems", total=len(ms) * len(ps))
        _run(lambda: run_pcg_table(ms, ps, cfg, timings, lambda: progress.advance(task)), out, "pcg-table")


@app.command("spectrum-check")
def spectrum_check(
    n: str = typer.Option("2,4,8", help="Comma-separated element counts"),
    p: str = typer.Option("3,5,8", help="Comma-separated degrees"),
    omega: str = typer.Option("0,1,10", help="Comma-separated screening parameters"),
    bc: str = typer.Option("dirichlet,neumann", help="Comma-separated boundary conditions"),
    eps: float = typer.Option(1e-10, help="ADI tolerance used for the reported shift count"),
    out: Optional[Path] = OutOption,
):
    """Compare dense pencil spectra with the analytic intervals and report the shift count."""
    try:
        bcs = [BoundaryCondition(b) for b in bc.split(",") if b.strip()]
    except ValueError as e:
        raise typer.BadParameter(str(e), param_hint="--bc") from None
    _run(
        lambda: run_spectrum_check(_int_list(n), _int_list(p), _float_list(omega), bcs, eps),
        out, "spectrum-check",
    )


if __name__ == "__main__":
    app()
