from __future__ import annotations

import enum
import logging
from dataclasses import dataclass

import numpy as np

from ..assembly.mesh import Space1D
from ..assembly.operators import Operators1D, assemble_rhs_2d, conversion_matrix, evaluate_basis
from ..errors import IncompatibleStructure
from ..spectral.bounds import lemma_spectrum_bounds
from .solver import AdiPlan, adi_precompute, adi_solve

logger = logging.getLogger(__name__)


class Basis(str, enum.Enum):
    PIECEWISE_LEGENDRE = "piecewise-legendre"
    HAT_BUBBLE_Q = "hat-bubble-q"
    HAT_BUBBLE_C = "hat-bubble-c"

    @classmethod
    def hat_bubble(cls, space: Space1D) -> "Basis":
        return cls.HAT_BUBBLE_C if space.bc.keep_left and space.bc.keep_right else cls.HAT_BUBBLE_Q

    def size(self, space: Space1D) -> int:
        return space.legendre_dim if self is Basis.PIECEWISE_LEGENDRE else space.dim


@dataclass(frozen=True, eq=False)
class CoefficientField2D:
    """Coefficient matrix of a tensor-product expansion; rows follow ``space_x``, columns ``space_y``."""

    values: np.ndarray
    basis_x: Basis
    basis_y: Basis
    space_x: Space1D
    space_y: Space1D

    def __post_init__(self):
        expected = (self.basis_x.size(self.space_x), self.basis_y.size(self.space_y))
        if np.shape(self.values) != expected:
            raise IncompatibleStructure(f"coefficients of shape {np.shape(self.values)}, expected {expected}")

    def to_legendre(self) -> "CoefficientField2D":
        """Piecewise-Legendre coefficients ``R_x U R_y^T``."""
        if self.basis_x is Basis.PIECEWISE_LEGENDRE and self.basis_y is Basis.PIECEWISE_LEGENDRE:
            return self
        if Basis.PIECEWISE_LEGENDRE in (self.basis_x, self.basis_y):
            raise ValueError("mixed-basis fields are not converted")
        Rx, Ry = conversion_matrix(self.space_x), conversion_matrix(self.space_y)
        values = np.asarray(Ry @ (Rx @ self.values).T).T
        return CoefficientField2D(
            values, Basis.PIECEWISE_LEGENDRE, Basis.PIECEWISE_LEGENDRE, self.space_x, self.space_y
        )

    def evaluate(self, x, y) -> np.ndarray:
        """Values on the tensor grid ``x`` by ``y``."""
        if self.basis_x is Basis.PIECEWISE_LEGENDRE:
            raise ValueError("evaluate a hat-bubble field; piecewise-Legendre fields go through a transform plan")
        Ex, Ey = evaluate_basis(self.space_x, x), evaluate_basis(self.space_y, y)
        return Ex @ self.values @ Ey.T


def screened_poisson_plan(
    space_x: Space1D, space_y: Space1D, omega: float, eps: float, heuristic: bool = False
) -> tuple[AdiPlan, Operators1D, Operators1D]:
    """ADI plan for ``(Delta_x + w M_x) U M_y + M_x U (Delta_y + w M_y) = G`` with ``w = omega^2 / 2``.

    The pencils are bounded analytically, so no eigenvalue problem is solved.
    """
    ox, oy = space_x.operators(omega), space_y.operators(omega)
    bounds = []
    for space in (space_x, space_y):
        mesh = space.mesh
        bounds.append(lemma_spectrum_bounds(mesh.h, space.degree, omega, space.bc, mesh.length).reciprocal())
    plan = adi_precompute(
        ox.shifted, oy.shifted.scaled(-1.0), oy.mass, ox.mass, eps,
        interval_x=bounds[0], interval_y=bounds[1], heuristic=heuristic,
    )
    return plan, ox, oy


def solve_screened_poisson_2d(
    space_x: Space1D,
    space_y: Space1D,
    omega: float,
    F_leg,
    eps: float,
    plan: AdiPlan | None = None,
) -> CoefficientField2D:
    """Hat-bubble coefficients of ``-Laplace(u) + omega^2 u = f`` for piecewise-Legendre data ``F_leg``."""
    if plan is None:
        plan, _, _ = screened_poisson_plan(space_x, space_y, omega, eps)
    G = assemble_rhs_2d(space_x, space_y, F_leg)
    U = adi_solve(plan, G)
    logger.debug("screened Poisson solve %dx%d with J=%d", U.shape[0], U.shape[1], plan.J)
    return CoefficientField2D(U, Basis.hat_bubble(space_x), Basis.hat_bubble(space_y), space_x, space_y)
