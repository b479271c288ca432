"""Experiment drivers behind the command line; every ``run_*`` returns CSV-ready rows."""
from __future__ import annotations

import itertools
import logging
import math
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import config
from .adi.poisson import Basis, CoefficientField2D, screened_poisson_plan
from .adi.solver import adi_solve, sylvester_residual
from .assembly.mesh import BoundaryCondition, Space1D
from .assembly.operators import assemble_operators, assemble_rhs_1d, assemble_rhs_2d, evaluate_basis
from .frontends.burgers import BurgersState, boundary_values, bump_initial, burgers_step, indicator_initial
from .frontends.pcg import PcgConfig, graded_problem, pcg_solve
from .linalg.b3 import axpy_shift
from .linalg.cholesky import reverse_cholesky
from .models import ExperimentSpec, InitialCondition, Manufactured
from .spectral.bounds import adi_shifts, lemma_spectrum_bounds, pencil_spectrum_dense
from .transforms.plan import TransformPlan, analysis_1d, analysis_2d
from .utils.output import result_row
from .utils.timing import timed

logger = logging.getLogger(__name__)

Row = dict[str, str]
Progress = Optional[Callable[[], None]]

# value checks use a grid finer than the solution degree
CHECK_POINTS = 24


def manufactured_1d(space: Space1D) -> tuple[Callable[[np.ndarray], np.ndarray], float]:
    """Eigenfunction ``u`` of ``-u''`` that satisfies the space's boundary conditions, with its eigenvalue."""
    a, L = space.mesh.a, space.mesh.length
    bc = space.bc
    mixed = bc in (BoundaryCondition.NEUMANN_DIRICHLET, BoundaryCondition.DIRICHLET_NEUMANN)
    k = math.pi / (2 * L) if mixed else math.pi / L
    if bc.keep_left:
        return (lambda x: np.cos(k * (np.asarray(x) - a))), k * k
    return (lambda x: np.sin(k * (np.asarray(x) - a))), k * k


def _check_grid(space: Space1D) -> np.ndarray:
    return TransformPlan.for_space(space, CHECK_POINTS).grid


def run_solve1d(spec: ExperimentSpec) -> list[Row]:
    """Solve ``-u'' + omega^2 u = f`` for a manufactured eigenfunction and report the max error."""
    space = spec.space()
    u, lam = manufactured_1d(space)
    plan = TransformPlan.for_space(space)
    f_leg = analysis_1d(plan, (lam + spec.omega ** 2) * u(plan.grid))

    def factor():
        ops = assemble_operators(space, spec.omega)
        return reverse_cholesky(axpy_shift(ops.laplacian, spec.omega ** 2, ops.mass))

    t_factor, chol = timed(factor, spec.timings)
    rhs = assemble_rhs_1d(space, f_leg)
    t_solve, coeffs = timed(lambda: chol.solve(rhs), spec.timings)
    x = _check_grid(space)
    error = float(np.max(np.abs(evaluate_basis(space, x) @ coeffs - u(x))))
    logger.info("solve1d N=%d: max error %.3e", space.dim, error)
    return [result_row(spec.parameters(), space.dim, t_factor, t_solve, 0, error)]


def run_scaling1d(
    spec: ExperimentSpec, elements: Sequence[int], p_max: int, progress: Progress = None
) -> list[Row]:
    """Factor and solve times for ``p = 2, 4, 8, ... <= p_max`` on each element count.

    Right-hand sides are random piecewise-Legendre data; the error column is the relative residual.
    """
    rng = np.random.default_rng(spec.seed)
    degrees = [2 ** k for k in range(1, int(math.log2(p_max)) + 1)]
    rows = []
    for n, p in itertools.product(elements, degrees):
        space = spec.model_copy(update={"n": n, "degree": p}).space()
        f_leg = rng.standard_normal(space.legendre_dim)

        def factor():
            ops = assemble_operators(space, spec.omega)
            A = axpy_shift(ops.laplacian, spec.omega ** 2, ops.mass)
            return A, reverse_cholesky(A)

        t_factor, (A, chol) = timed(factor, spec.timings)
        rhs = assemble_rhs_1d(space, f_leg)
        t_solve, x = timed(lambda: chol.solve(rhs), spec.timings)
        residual = float(np.linalg.norm(A.matvec(x) - rhs) / np.linalg.norm(rhs))
        params = {**spec.parameters(), "n": n, "p": p}
        rows.append(result_row(params, space.dim, t_factor, t_solve, 0, residual))
        if progress:
            progress()
    return rows


def manufactured_2d(
    space_x: Space1D, space_y: Space1D, omega: float, kind: Manufactured
) -> tuple[Callable, Optional[Callable]]:
    """Right-hand side sampler and exact solution (``None`` when unknown) of the 2D screened problem."""
    if kind is Manufactured.ZERO:
        return (lambda X, Y: np.zeros_like(X)), (lambda X, Y: np.zeros_like(X))
    if kind is Manufactured.INDICATOR:
        return indicator_initial(), None
    ux, lx = manufactured_1d(space_x)
    uy, ly = manufactured_1d(space_y)

    def exact(X, Y):
        return ux(X) * uy(Y)

    return (lambda X, Y: (lx + ly + omega ** 2) * exact(X, Y)), exact


def run_solve2d(
    spec: ExperimentSpec, kind: Manufactured = Manufactured.SIN, rhs_grid: Optional[np.ndarray] = None
) -> list[Row]:
    """ADI solve of ``-Laplace(u) + omega^2 u = f`` on a square.

    The error column is the max grid error when the solution is known and the relative Sylvester
    residual otherwise.
    """
    space = spec.space()
    plan_x = TransformPlan.for_space(space)
    X, Y = np.meshgrid(plan_x.grid, plan_x.grid, indexing="ij")
    if rhs_grid is not None:
        if rhs_grid.shape != X.shape:
            raise ValueError(f"right-hand side grid has shape {rhs_grid.shape}, expected {X.shape}")
        values, exact = rhs_grid, None
    else:
        sampler, exact = manufactured_2d(space, space, spec.omega, kind)
        values = sampler(X, Y)
    F_leg = analysis_2d(plan_x, plan_x, values)

    t_factor, (plan, _, _) = timed(lambda: screened_poisson_plan(space, space, spec.omega, spec.eps), spec.timings)
    G = assemble_rhs_2d(space, space, F_leg)
    t_solve, U = timed(lambda: adi_solve(plan, G), spec.timings)
    if exact is not None:
        x = _check_grid(space)
        field = CoefficientField2D(U, Basis.hat_bubble(space), Basis.hat_bubble(space), space, space)
        Xc, Yc = np.meshgrid(x, x, indexing="ij")
        error = float(np.max(np.abs(field.evaluate(x, x) - exact(Xc, Yc))))
    else:
        error = sylvester_residual(plan.A, plan.B, plan.C, plan.D, U, G)
    logger.info("solve2d N=%d^2, J=%d: error %.3e", space.dim, plan.J, error)
    return [result_row(spec.parameters(), space.dim ** 2, t_factor, t_solve, plan.J, error)]


def run_scaling2d(spec: ExperimentSpec, p_max: int, progress: Progress = None) -> list[Row]:
    """Plan and solve times of the manufactured 2D problem for ``p = 4, 8, ... <= p_max``."""
    rows = []
    for k in range(2, int(math.log2(p_max)) + 1):
        rows += run_solve2d(spec.model_copy(update={"degree": 2 ** k}), Manufactured.SIN)
        if progress:
            progress()
    return rows


def initial_sampler(kind: InitialCondition) -> Callable:
    return indicator_initial() if kind is InitialCondition.INDICATOR else bump_initial()


def run_burgers(
    spec: ExperimentSpec,
    steps: int,
    dt: float,
    viscosity: float,
    initial: InitialCondition = InitialCondition.INDICATOR,
    progress: Progress = None,
) -> list[Row]:
    """One row per step; the error column is the largest boundary value of the stepped state."""
    if steps < 1:
        raise ValueError(f"step count must be positive, got {steps}")
    space = spec.space()
    t_factor, state = timed(
        lambda: BurgersState.initial(space, space, initial_sampler(initial), viscosity, dt, spec.eps),
        spec.timings, repeats=1,
    )
    rows = []
    for _ in range(steps):
        t_step, state = timed(lambda s=state: burgers_step(s), spec.timings, repeats=1)
        bmax = float(np.max(np.abs(boundary_values(state))))
        params = {**spec.parameters(), "step": state.step, "dt": dt, "viscosity": viscosity}
        rows.append(result_row(params, space.dim ** 2, t_factor, t_step, state.adi.J, bmax))
        if progress:
            progress()
    return rows


def run_pcg_table(
    ms: Iterable[int], ps: Iterable[int], config_: PcgConfig, timings: bool = True, progress: Progress = None
) -> list[Row]:
    """PCG iteration counts for the graded log-coefficient problem over every ``(m, p)``."""
    rows = []
    for m, p in itertools.product(ms, ps):
        t_factor, problem = timed(lambda: graded_problem(m, p, config_), timings, repeats=1)
        t_solve, result = timed(
            lambda: pcg_solve(problem.apply, problem.rhs, problem.precondition, config_), timings, repeats=1
        )
        params = {"m": m, "p": p, "cells": problem.space.n ** 2, "rel_tol": config_.rel_tol,
                  "precond_tol": config_.precond_tol}
        rows.append(result_row(params, problem.space.dim ** 2, t_factor, t_solve, result.iterations, result.residual))
        if progress:
            progress()
    return rows


def run_spectrum_check(
    elements: Iterable[int],
    degrees: Iterable[int],
    omegas: Iterable[float],
    bcs: Iterable[BoundaryCondition],
    eps: float,
) -> list[Row]:
    """Dense spectra of ``(M, Delta + omega^2/2 M)`` against the analytic interval.

    ``iters`` is the shift count ``J`` of the symmetric screened problem; ``error`` is the largest
    relative excursion of the dense spectrum outside the interval (0 when contained). Inadmissible
    combinations and pencils above the dense limit are skipped.
    """
    rows = []
    for n, p, omega, bc in itertools.product(elements, degrees, omegas, bcs):
        if omega == 0 and not bc.definite:
            continue
        space = ExperimentSpec(command="spectrum-check", n=n, degree=p, omega=omega, bc=bc).space()
        if space.dim > config.DENSE_SPECTRUM_LIMIT:
            logger.warning("skipping n=%d p=%d: order %d exceeds the dense limit", n, p, space.dim)
            continue
        ops = space.operators(omega)
        lo, hi = pencil_spectrum_dense(ops.mass, ops.shifted)
        bounds = lemma_spectrum_bounds(space.mesh.h, p, omega, bc, space.mesh.length)
        excursion = max(0.0, (bounds.lo - lo) / bounds.lo, (hi - bounds.hi) / bounds.hi)
        shift_interval = bounds.reciprocal()
        J = adi_shifts(shift_interval.lo, shift_interval.hi, -shift_interval.hi, -shift_interval.lo, eps).J
        params = {"n": n, "p": p, "omega": omega, "bc": bc.value, "lo": lo, "hi": hi,
                  "bound_lo": bounds.lo, "bound_hi": bounds.hi}
        rows.append(result_row(params, space.dim, 0.0, 0.0, J, excursion))
    return rows
