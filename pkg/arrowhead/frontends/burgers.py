"""Viscous Burgers ``u_t + u u_x = eps Laplace(u)`` with zero Dirichlet data on a rectangle.

Each step is an implicit Euler heat step solved by ADI, followed by an explicit Euler step of the
advection term evaluated on the piecewise Chebyshev grid.
"""
from __future__ import annotations

import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ..adi.poisson import screened_poisson_plan
from ..adi.solver import AdiPlan, adi_solve
from ..assembly.mesh import BoundaryCondition, Space1D
from ..assembly.operators import assemble_rhs_2d, conversion_matrix, derivative_matrix, legendre_evaluation_matrix
from ..errors import ArrowheadError
from ..transforms.plan import TransformPlan, analysis_2d, synthesis_2d

logger = logging.getLogger(__name__)

DEFAULT_VISCOSITY = 0.1
DEFAULT_DT = 1e-3
DEFAULT_ADI_TOL = 1e-10

Sampler = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class BurgersState:
    """Piecewise-Legendre coefficients ``coeffs`` of ``u_k`` together with everything a step reuses.

    ``half_step`` keeps the hat-bubble coefficients of the last implicit half-step.
    """

    space_x: Space1D
    space_y: Space1D
    coeffs: np.ndarray
    viscosity: float
    dt: float
    adi: AdiPlan
    plan_x: TransformPlan
    plan_y: TransformPlan
    step: int = 0
    half_step: Optional[np.ndarray] = None

    @classmethod
    def initial(
        cls,
        space_x: Space1D,
        space_y: Space1D,
        u0: Union[Sampler, np.ndarray],
        viscosity: float = DEFAULT_VISCOSITY,
        dt: float = DEFAULT_DT,
        eps: float = DEFAULT_ADI_TOL,
    ) -> "BurgersState":
        """Start from a sampler ``u0(X, Y)`` or from values on the transform grid."""
        if viscosity <= 0 or dt <= 0:
            raise ValueError(f"viscosity and dt must be positive, got {viscosity} and {dt}")
        for space in (space_x, space_y):
            if space.bc is not BoundaryCondition.DIRICHLET:
                raise ValueError("Burgers stepping uses zero Dirichlet data on every side")
        plan_x, plan_y = TransformPlan.for_space(space_x), TransformPlan.for_space(space_y)
        if callable(u0):
            X, Y = np.meshgrid(plan_x.grid, plan_y.grid, indexing="ij")
            values = np.asarray(u0(X, Y), dtype=float)
        else:
            values = np.asarray(u0, dtype=float)
        coeffs = analysis_2d(plan_x, plan_y, values)
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("initial data must be finite on the grid")
        omega = 1.0 / math.sqrt(dt * viscosity)
        adi, _, _ = screened_poisson_plan(space_x, space_y, omega, eps)
        logger.info("Burgers setup: %dx%d unknowns, dt=%g, viscosity=%g, J=%d",
                    space_x.dim, space_y.dim, dt, viscosity, adi.J)
        return cls(space_x, space_y, coeffs, float(viscosity), float(dt), adi, plan_x, plan_y)

    def values(self) -> np.ndarray:
        """``u_k`` on the transform grid."""
        return synthesis_2d(self.plan_x, self.plan_y, self.coeffs)


def heat_half_step(state: BurgersState) -> np.ndarray:
    """Hat-bubble coefficients of ``(I - dt eps Laplace)^{-1} u_k`` in weak form."""
    scale = state.dt * state.viscosity
    G = assemble_rhs_2d(state.space_x, state.space_y, state.coeffs) / scale
    return adi_solve(state.adi, G)


def burgers_step(state: BurgersState, nonlinear: bool = True) -> BurgersState:
    U = heat_half_step(state)
    Rx, Ry = conversion_matrix(state.space_x), conversion_matrix(state.space_y)
    RyU = (Ry @ U.T).T
    V = synthesis_2d(state.plan_x, state.plan_y, np.asarray(Rx @ RyU))
    if nonlinear:
        Dx = derivative_matrix(state.space_x)
        Vx = synthesis_2d(state.plan_x, state.plan_y, np.asarray(Dx @ RyU))
        V = V - state.dt * V * Vx
    coeffs = analysis_2d(state.plan_x, state.plan_y, V)
    if not np.all(np.isfinite(coeffs)):
        raise ArrowheadError(f"Burgers solution became non-finite at step {state.step + 1}")
    return dataclasses.replace(state, coeffs=coeffs, step=state.step + 1, half_step=U)


def boundary_values(state: BurgersState) -> np.ndarray:
    """Values of ``u_k`` on the four sides, sampled at the transform grid of the other direction."""
    sx, sy = state.space_x, state.space_y
    ex = legendre_evaluation_matrix(sx, [sx.mesh.a, sx.mesh.b]).toarray()
    ey = legendre_evaluation_matrix(sy, [sy.mesh.a, sy.mesh.b]).toarray()
    gx = legendre_evaluation_matrix(sx, state.plan_x.grid).toarray()
    gy = legendre_evaluation_matrix(sy, state.plan_y.grid).toarray()
    C = state.coeffs
    return np.concatenate([(ex @ C @ gy.T).ravel(), (gx @ C @ ey.T).ravel()])


def run_burgers(state: BurgersState, steps: int, nonlinear: bool = True) -> BurgersState:
    for _ in range(steps):
        state = burgers_step(state, nonlinear=nonlinear)
    return state


def indicator_initial(x0: float = -1.0 / 3.0, x1: float = 1.0 / 3.0) -> Sampler:
    """Indicator of the square ``[x0, x1]^2``; aligned with 3x3 and 9x9 meshes of [-1, 1]^2."""
    def sample(X, Y):
        return ((X >= x0) & (X <= x1) & (Y >= x0) & (Y <= x1)).astype(float)
    return sample


def bump_initial(width: float = 10.0) -> Sampler:
    def sample(X, Y):
        return np.exp(-width * (X ** 2 + Y ** 2)) * (1 - X ** 2) * (1 - Y ** 2)
    return sample
