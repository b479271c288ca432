from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..assembly.mesh import Mesh1D, Space1D
from ..assembly.operators import conversion_matrix
from ..basis.legendre import legendre_vander
from ..errors import IncompatibleStructure
from .chebyshev import (
    chebyshev_analysis,
    chebyshev_synthesis,
    chebyshev_to_legendre,
    cheb_points,
    fejer_weights,
    legendre_to_chebyshev,
)

logger = logging.getLogger(__name__)


@functools.lru_cache(maxsize=64)
def _legendre_on_grid(points: int, degree: int) -> np.ndarray:
    V = legendre_vander(degree, cheb_points(points))
    V.setflags(write=False)
    return V


@dataclass(frozen=True, eq=False)
class TransformPlan:
    """Piecewise Chebyshev grid of ``points`` first-kind points on every element of ``mesh``.

    Grid values run element by element, ascending within each element. Coefficients are interlaced
    degree-major: slot ``d * n + e`` holds the ``P_d`` coefficient on element ``e``.
    """

    mesh: Mesh1D
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise ValueError(f"need at least one point per element, got {self.points}")

    @classmethod
    def for_space(cls, space: Space1D, points: Optional[int] = None) -> "TransformPlan":
        """Default ``degree + 1`` points, exact for every function of the space."""
        return cls(space.mesh, space.degree + 1 if points is None else int(points))

    @property
    def n(self) -> int:
        return self.mesh.n

    @property
    def size(self) -> int:
        return self.points * self.n

    @functools.cached_property
    def grid(self) -> np.ndarray:
        g = self.mesh.element_points(cheb_points(self.points)).reshape(-1)
        g.setflags(write=False)
        return g

    def _split_values(self, values) -> tuple[np.ndarray, tuple]:
        values = np.asarray(values, dtype=float)
        if values.shape[0] != self.size:
            raise IncompatibleStructure(f"expected {self.size} grid values, got {values.shape[0]}")
        rest = values.shape[1:]
        # (points, n, K)
        return values.reshape(self.n, self.points, -1).transpose(1, 0, 2), rest

    def analysis(self, values, method: str = "fft") -> np.ndarray:
        """Grid values to interlaced piecewise-Legendre coefficients of degrees ``0 .. points - 1``."""
        blocks, rest = self._split_values(values)
        leg = chebyshev_to_legendre(chebyshev_analysis(blocks, method=method))
        return leg.reshape((self.size,) + rest)

    def synthesis(self, coeffs, method: str = "fft") -> np.ndarray:
        """Interlaced piecewise-Legendre coefficients to grid values; absent top degrees count as zero."""
        coeffs = np.asarray(coeffs, dtype=float)
        rows, rest = coeffs.shape[0], coeffs.shape[1:]
        if rows % self.n or rows // self.n > self.points:
            raise IncompatibleStructure(
                f"{rows} coefficients do not fit {self.n} elements of at most {self.points} degrees"
            )
        blocks = np.zeros((self.points, self.n, int(np.prod(rest, dtype=int))))
        blocks[:rows // self.n] = coeffs.reshape(rows // self.n, self.n, -1)
        values = chebyshev_synthesis(legendre_to_chebyshev(blocks), method=method)
        return values.transpose(1, 0, 2).reshape((self.size,) + rest)

    def moments(self, values, degree: Optional[int] = None) -> np.ndarray:
        """Fejer approximations of ``int P_d f`` over every element, ``d = 0 .. degree``, interlaced."""
        degree = self.points - 1 if degree is None else int(degree)
        blocks, rest = self._split_values(values)
        V = _legendre_on_grid(self.points, degree)
        w = fejer_weights(self.points)
        scale = self.mesh.widths / 2.0
        out = np.einsum("jd,j,jek->dek", V, w, blocks) * scale[None, :, None]
        return out.reshape(((degree + 1) * self.n,) + rest)


def analysis_1d(plan: TransformPlan, values, method: str = "fft") -> np.ndarray:
    return plan.analysis(values, method)


def synthesis_1d(plan: TransformPlan, coeffs, method: str = "fft") -> np.ndarray:
    return plan.synthesis(coeffs, method)


def analysis_2d(plan_x: TransformPlan, plan_y: TransformPlan, values, method: str = "fft") -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (plan_x.size, plan_y.size):
        raise IncompatibleStructure(f"grid of shape {values.shape}, expected {(plan_x.size, plan_y.size)}")
    return plan_y.analysis(plan_x.analysis(values, method).T, method).T


def synthesis_2d(plan_x: TransformPlan, plan_y: TransformPlan, coeffs, method: str = "fft") -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 2:
        raise IncompatibleStructure(f"expected a coefficient matrix, got shape {coeffs.shape}")
    return plan_y.synthesis(plan_x.synthesis(coeffs, method).T, method).T


def moments_2d(plan_x: TransformPlan, plan_y: TransformPlan, values, degree_x: int, degree_y: int) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    if values.shape != (plan_x.size, plan_y.size):
        raise IncompatibleStructure(f"grid of shape {values.shape}, expected {(plan_x.size, plan_y.size)}")
    return plan_y.moments(plan_x.moments(values, degree_x).T, degree_y).T


def hatbubble_to_values(
    plan_x: TransformPlan, plan_y: TransformPlan, U, space_x: Space1D, space_y: Space1D, method: str = "fft"
) -> np.ndarray:
    """Grid values of ``sum U_ij phi_i(x) psi_j(y)`` through ``R_x U R_y^T``."""
    U = np.asarray(U, dtype=float)
    if U.shape != (space_x.dim, space_y.dim):
        raise IncompatibleStructure(f"coefficients of shape {U.shape}, expected {(space_x.dim, space_y.dim)}")
    Rx, Ry = conversion_matrix(space_x), conversion_matrix(space_y)
    L = np.asarray(Ry @ (Rx @ U).T).T
    return synthesis_2d(plan_x, plan_y, L, method)
