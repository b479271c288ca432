"""Matrix-free preconditioned conjugate gradients for ``-Laplace(u) + g(x, y) u = f``.

The operator is applied through transforms on an oversampled grid; one ADI solve of the constant
coefficient Poisson problem serves as preconditioner.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..adi.poisson import screened_poisson_plan
from ..adi.solver import AdiPlan, adi_solve
from ..assembly.mesh import Mesh1D, Space1D
from ..assembly.operators import Operators1D, assemble_rhs_2d, conversion_matrix
from ..errors import IncompatibleStructure, InvalidParameterError, MaxIterExceeded
from ..transforms.plan import TransformPlan, moments_2d, synthesis_2d

logger = logging.getLogger(__name__)

Operator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class PcgConfig:
    rel_tol: float = 1e-8
    max_iter: int = 500
    precond_tol: float = 1e-4

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be positive, got {self.max_iter}")
        if not 0 < self.precond_tol < 1:
            raise ValueError(f"precond_tol must lie in (0, 1), got {self.precond_tol}")


@dataclass(frozen=True)
class PcgResult:
    solution: np.ndarray
    iterations: int
    residual: float
    history: tuple[float, ...]


def _right_apply(M, X: np.ndarray) -> np.ndarray:
    return M.matvec(X.T).T


def laplacian_apply(ox: Operators1D, oy: Operators1D, U: np.ndarray) -> np.ndarray:
    """``Delta_x U M_y + M_x U Delta_y``."""
    return _right_apply(oy.mass, ox.laplacian.matvec(U)) + _right_apply(oy.laplacian, ox.mass.matvec(U))


@dataclass(frozen=True, eq=False)
class VariableCoefficient:
    """Weak form of ``g(x, y) u`` integrated on ``2 (p + 1)`` Chebyshev points per element."""

    space_x: Space1D
    space_y: Space1D
    plan_x: TransformPlan
    plan_y: TransformPlan
    values: np.ndarray

    @classmethod
    def sample(cls, space_x: Space1D, space_y: Space1D, g: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        plan_x = TransformPlan.for_space(space_x, 2 * (space_x.degree + 1))
        plan_y = TransformPlan.for_space(space_y, 2 * (space_y.degree + 1))
        X, Y = np.meshgrid(plan_x.grid, plan_y.grid, indexing="ij")
        values = np.asarray(g(X, Y), dtype=float)
        if values.shape != X.shape:
            raise IncompatibleStructure(f"coefficient returned shape {values.shape}, expected {X.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("variable coefficient is not finite on the quadrature grid")
        return cls(space_x, space_y, plan_x, plan_y, values)

    def apply(self, U: np.ndarray) -> np.ndarray:
        return apply_variable_coefficient(self, U)


def apply_variable_coefficient(coef: VariableCoefficient, U: np.ndarray) -> np.ndarray:
    """``R_x^T moments(g * synthesis(R_x U R_y^T)) R_y``."""
    sx, sy = coef.space_x, coef.space_y
    Rx, Ry = conversion_matrix(sx), conversion_matrix(sy)
    L = np.asarray(Ry @ np.asarray(Rx @ U).T).T
    values = synthesis_2d(coef.plan_x, coef.plan_y, L)
    M = moments_2d(coef.plan_x, coef.plan_y, coef.values * values, sx.degree, sy.degree)
    return np.asarray(Ry.T @ np.asarray(Rx.T @ M).T).T


def pcg_solve(
    apply: Operator,
    rhs: np.ndarray,
    precondition: Optional[Operator] = None,
    config: PcgConfig = PcgConfig(),
    x0: Optional[np.ndarray] = None,
) -> PcgResult:
    """Conjugate gradients on matrices with the Frobenius inner product.

    Stops once ``||r|| <= rel_tol ||rhs||``; raises :class:`MaxIterExceeded` otherwise.
    """
    b = np.asarray(rhs, dtype=float)
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    if x.shape != b.shape:
        raise IncompatibleStructure(f"initial guess of shape {x.shape}, right-hand side {b.shape}")
    if precondition is None:
        precondition = lambda r: r  # noqa: E731

    b_norm = float(np.linalg.norm(b))
    if b_norm == 0.0:
        return PcgResult(np.zeros_like(b), 0, 0.0, (0.0,))

    r = b - apply(x) if x0 is not None else b.copy()
    res = float(np.linalg.norm(r)) / b_norm
    history = [res]
    if res <= config.rel_tol:
        return PcgResult(x, 0, res, tuple(history))

    z = precondition(r)
    d = z.copy()
    rz = float(np.sum(r * z))
    for it in range(1, config.max_iter + 1):
        Ad = apply(d)
        dAd = float(np.sum(d * Ad))
        if dAd <= 0:
            raise ValueError(f"operator is not positive definite: d^T A d = {dAd:.3e} at iteration {it}")
        alpha = rz / dAd
        x += alpha * d
        r -= alpha * Ad
        res = float(np.linalg.norm(r)) / b_norm
        history.append(res)
        logger.debug("pcg iteration %d: relative residual %.3e", it, res)
        if res <= config.rel_tol:
            return PcgResult(x, it, res, tuple(history))
        z = precondition(r)
        rz_new = float(np.sum(r * z))
        d = z + (rz_new / rz) * d
        rz = rz_new
    raise MaxIterExceeded("pcg", config.max_iter, res, x)


def graded_mesh(m: int) -> Mesh1D:
    """``2 (m + 1)`` elements on [-1, 1] graded geometrically towards 0 with ratio 10; needs ``m >= 1``."""
    if m < 1:
        raise InvalidParameterError(f"grading depth must be at least 1, got {m}")
    pos = 10.0 ** -np.arange(m, -1, -1, dtype=float)
    return Mesh1D.from_sequence(np.concatenate([-pos[::-1], [0.0], pos]))


def log_coefficient(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """``-10 log |(x, y)|``, singular at the origin."""
    return -10.0 * np.log(np.sqrt(X ** 2 + Y ** 2))


@dataclass(frozen=True, eq=False)
class GradedProblem:
    space: Space1D
    ops: Operators1D
    coefficient: VariableCoefficient
    precond: AdiPlan
    rhs: np.ndarray

    def apply(self, U: np.ndarray) -> np.ndarray:
        return laplacian_apply(self.ops, self.ops, U) + self.coefficient.apply(U)

    def precondition(self, R: np.ndarray) -> np.ndarray:
        return adi_solve(self.precond, R)


def graded_problem(m: int, p: int, config: PcgConfig = PcgConfig()) -> GradedProblem:
    """``(-Laplace - 10 log |x|) u = 1`` on [-1, 1]^2 with zero Dirichlet data."""
    space = Space1D(graded_mesh(m), p)
    plan, ops, _ = screened_poisson_plan(space, space, 0.0, config.precond_tol)
    coefficient = VariableCoefficient.sample(space, space, log_coefficient)
    rhs = assemble_rhs_2d(space, space, np.ones((space.n, space.n)))
    return GradedProblem(space, ops, coefficient, plan, rhs)


def solve_graded_problem(m: int, p: int, config: PcgConfig = PcgConfig()) -> PcgResult:
    """Solve the graded log-coefficient problem and report the PCG iteration count."""
    started = time.perf_counter()
    problem = graded_problem(m, p, config)
    result = pcg_solve(problem.apply, problem.rhs, problem.precondition, config)
    logger.info(
        "graded problem m=%d p=%d: %d iterations, residual %.3e, %.3f s",
        m, p, result.iterations, result.residual, time.perf_counter() - started,
    )
    return result
