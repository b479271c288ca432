"""Generalised ADI for ``A U C - D U B = F`` with symmetric arrowhead operators.

``sigma(A, D)`` must be positive and ``sigma(B, C)`` negative; ``C`` and ``D`` are definite.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import config
from ..errors import IncompatibleStructure
from ..linalg.b3 import B3Arrowhead, axpy_shift
from ..linalg.cholesky import ReverseCholeskyFactor, reverse_cholesky
from ..spectral.bounds import AdiShiftPlan, SpectralInterval, adi_shifts, estimate_generalized_spectrum

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AdiPlan:
    A: B3Arrowhead
    B: B3Arrowhead
    C: B3Arrowhead
    D: B3Arrowhead
    shifts: AdiShiftPlan
    left: tuple[ReverseCholeskyFactor, ...]
    right: tuple[ReverseCholeskyFactor, ...]
    mass: ReverseCholeskyFactor

    @property
    def J(self) -> int:
        return self.shifts.J

    @property
    def shape(self) -> tuple[int, int]:
        return (self.A.N, self.B.N)


def adi_precompute(
    A: B3Arrowhead,
    B: B3Arrowhead,
    C: B3Arrowhead,
    D: B3Arrowhead,
    eps: float,
    interval_x: Optional[SpectralInterval] = None,
    interval_y: Optional[SpectralInterval] = None,
    heuristic: bool = False,
) -> AdiPlan:
    """Shifts and every factorisation the solve needs.

    ``interval_x`` bounds ``sigma(A, D)`` and ``interval_y`` bounds ``sigma(-B, C)``; missing ones
    come from the dense pencil.
    """
    if A.N != D.N or B.N != C.N:
        raise IncompatibleStructure(f"operator orders do not pair up: A {A.N}, D {D.N}, B {B.N}, C {C.N}")
    started = time.perf_counter()
    ix = estimate_generalized_spectrum(A, D, interval_x)
    iy = estimate_generalized_spectrum(B.scaled(-1.0), C, interval_y)
    shifts = adi_shifts(ix.lo, ix.hi, -iy.hi, -iy.lo, eps, heuristic=heuristic)

    negB = B.scaled(-1.0)
    left = tuple(reverse_cholesky(axpy_shift(A, -q, D)) for q in shifts.q)
    right = tuple(reverse_cholesky(axpy_shift(negB, p, C)) for p in shifts.p)
    mass = reverse_cholesky(C)
    logger.info(
        "ADI plan %dx%d: J=%d, gamma=%.3e, %d factorisations in %.3f s",
        A.N, B.N, shifts.J, shifts.gamma, 2 * shifts.J + 1, time.perf_counter() - started,
    )
    return AdiPlan(A, B, C, D, shifts, left, right, mass)


def _right_apply(M: B3Arrowhead, X: np.ndarray) -> np.ndarray:
    """``X M`` for symmetric ``M``."""
    return M.matvec(X.T).T


def sylvester_residual(A, B, C, D, U, F) -> float:
    """``||A U C - D U B - F||_F / ||F||_F`` (absolute when ``F`` vanishes)."""
    U = np.asarray(U, dtype=float)
    F = np.asarray(F, dtype=float)
    R = _right_apply(C, A.matvec(U)) - _right_apply(B, D.matvec(U)) - F
    scale = np.linalg.norm(F)
    return float(np.linalg.norm(R) / scale) if scale else float(np.linalg.norm(R))


def weighted_norm(X, C: B3Arrowhead, D: B3Arrowhead) -> float:
    """``||V X L^T||_F`` with ``C = L^T L`` and ``D = V^T V``, without forming either factor."""
    X = np.asarray(X, dtype=float)
    value = float(np.sum(X * _right_apply(C, D.matvec(X))))
    return float(np.sqrt(max(value, 0.0)))


def adi_solve(plan: AdiPlan, F, check_residual: Optional[bool] = None) -> np.ndarray:
    """Approximate ``U`` with ``||V (U - U*) L^T|| <= eps ||V U* L^T||``."""
    F = np.asarray(F, dtype=float)
    if F.shape != plan.shape:
        raise IncompatibleStructure(f"right-hand side of shape {F.shape}, plan expects {plan.shape}")
    A, B, C, D = plan.A, plan.B, plan.C, plan.D
    W = np.zeros_like(F)
    for j in range(plan.J):
        p, q = plan.shifts.p[j], plan.shifts.q[j]
        G = F - (A.matvec(W) - p * D.matvec(W))
        # right solve with B - pC, done as a left solve with its negation pC - B
        half = -plan.right[j].solve(G.T).T
        H = F - (_right_apply(B, half) - q * _right_apply(C, half))
        W = plan.left[j].solve(H)
    U = plan.mass.solve(W.T).T

    if check_residual is None:
        check_residual = config.DEBUG
    if check_residual:
        logger.info("ADI relative Sylvester residual %.3e", sylvester_residual(A, B, C, D, U, F))
    return U
