"""Multi-element operators of the hat-bubble space.

Coefficients of a piecewise-Legendre expansion of degrees 0..p are interlaced the same way as
the space itself: entry ``d * n + e`` holds the ``P_d`` coefficient on element ``e``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..basis.banded import BandedMatrix
from ..basis.legendre import legendre_vander
from ..errors import IncompatibleStructure
from ..linalg.b3 import B3Arrowhead, axpy_shift
from ..linalg.cholesky import reverse_cholesky
from .mesh import Space1D

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Operators1D:
    laplacian: B3Arrowhead
    mass: B3Arrowhead
    conversion: sp.csr_array
    derivative: sp.csr_array
    legendre_mass: BandedMatrix
    shifted: B3Arrowhead
    omega: float

    @property
    def legendre_weights(self) -> np.ndarray:
        return self.legendre_mass.data[0]


def _check_omega(space: Space1D, omega: float) -> float:
    omega = float(omega)
    if not np.isfinite(omega) or omega < 0:
        raise ValueError(f"omega must be a finite non-negative number, got {omega}")
    if omega == 0 and not space.bc.definite:
        raise ValueError("the Neumann problem needs omega > 0 to be definite")
    return omega


def legendre_weights(space: Space1D) -> np.ndarray:
    """Interlaced diagonal of ``M_P``: ``int P_d^2`` over element ``e`` at slot ``d * n + e``."""
    d = np.arange(space.degree + 1)
    return (space.mesh.widths[None, :] / (2 * d[:, None] + 1)).reshape(-1)


def _hat_columns(space: Space1D) -> np.ndarray:
    n = space.n
    keep = space.hat_nodes
    return np.concatenate([keep, np.arange(n + 1, n + 1 + space.bubble_blocks * n)])


def conversion_matrix(space: Space1D) -> sp.csr_array:
    """``R``: space coefficients to piecewise-Legendre coefficients of degrees 0..p."""
    n, p = space.n, space.degree
    rows, cols, vals = [], [], []
    e = np.arange(n)

    # rising half of the hat at node e + 1, falling half of the hat at node e
    for node, sign in ((e + 1, 1.0), (e, -1.0)):
        rows += [e, n + e]
        cols += [node, node]
        vals += [np.full(n, 0.5), np.full(n, 0.5 * sign)]

    for k in range(1, p):
        col = n + 1 + (k - 1) * n + e
        c = 1.0 / (2 * k + 1)
        rows += [(k - 1) * n + e, (k + 1) * n + e]
        cols += [col, col]
        vals += [np.full(n, c), np.full(n, -c)]

    full = sp.csr_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=((p + 1) * n, n + 1 + (p - 1) * n),
    )
    return full[:, _hat_columns(space)]


def derivative_matrix(space: Space1D) -> sp.csr_array:
    """``D``: space coefficients to piecewise-Legendre coefficients of the derivative.

    Uses ``W_k' = -P_{k+1}`` scaled by ``2 / delta_e``; the degree-p block is empty.
    """
    n, p = space.n, space.degree
    widths = space.mesh.widths
    e = np.arange(n)
    rows = [e, e]
    cols = [e + 1, e]
    vals = [1.0 / widths, -1.0 / widths]
    for k in range(1, p):
        rows.append(k * n + e)
        cols.append(n + 1 + (k - 1) * n + e)
        vals.append(-2.0 / widths)
    full = sp.csr_array(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=((p + 1) * n, n + 1 + (p - 1) * n),
    )
    return full[:, _hat_columns(space)]


def _gram(space: Space1D, R: sp.csr_array, weights: np.ndarray, blocks: int) -> B3Arrowhead:
    S = R.T @ sp.diags_array(weights) @ R
    S = ((S + S.T) * 0.5).tocsr()
    left = space.bc.keep_left
    return B3Arrowhead.from_sparse(
        S, space.hat_count, space.n, space.bubble_blocks, blocks, blocks, 1 if left else 0, 0 if left else 1
    )


def assemble_operators(space: Space1D, omega: float = 0.0) -> Operators1D:
    """Weak Laplacian, mass and their shift ``Delta + (omega^2 / 2) M`` as arrowhead matrices.

    Hats only see ``P_0`` in the derivative while bubbles start at ``P_1``, so the Laplacian has no
    hat-bubble coupling; the mass couples hats with the first two bubble blocks.
    """
    omega = _check_omega(space, omega)
    R = conversion_matrix(space)
    D = derivative_matrix(space)
    w = legendre_weights(space)
    laplacian = _gram(space, D, w, 0)
    mass = _gram(space, R, w, min(2, space.bubble_blocks))
    shifted = axpy_shift(laplacian, omega * omega / 2.0, mass)
    logger.debug(
        "assembled %s operators: n=%d, degree=%d, N=%d, omega=%g",
        space.bc.value, space.n, space.degree, space.dim, omega,
    )
    return Operators1D(laplacian, mass, R, D, BandedMatrix.diagonal(w), shifted, omega)


def _pad_blocks(f, n: int, blocks: int, axis: int, name: str) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    rows = f.shape[axis]
    if rows % n or rows // n > blocks or rows == 0:
        raise IncompatibleStructure(
            f"{name}: {rows} coefficients is not a whole number of {n}-element degree blocks up to {blocks}"
        )
    if rows == n * blocks:
        return f
    pad = [(0, 0)] * f.ndim
    pad[axis] = (0, n * blocks - rows)
    return np.pad(f, pad)


def assemble_rhs_1d(space: Space1D, f_leg) -> np.ndarray:
    """``R^T M_P f`` for a piecewise-Legendre vector (or column stack); missing top degrees are zero."""
    f = _pad_blocks(f_leg, space.n, space.degree + 1, 0, "assemble_rhs_1d")
    w = legendre_weights(space)
    return conversion_matrix(space).T @ (w.reshape((-1,) + (1,) * (f.ndim - 1)) * f)


def assemble_rhs_2d(space_x: Space1D, space_y: Space1D, F_leg) -> np.ndarray:
    """``R_x^T M_{P,x} F M_{P,y} R_y``."""
    F = _pad_blocks(F_leg, space_x.n, space_x.degree + 1, 0, "assemble_rhs_2d")
    F = _pad_blocks(F, space_y.n, space_y.degree + 1, 1, "assemble_rhs_2d")
    G = legendre_weights(space_x)[:, None] * F * legendre_weights(space_y)[None, :]
    Rx, Ry = conversion_matrix(space_x), conversion_matrix(space_y)
    return np.asarray(Ry.T @ (Rx.T @ G).T).T


def legendre_evaluation_matrix(space: Space1D, x) -> sp.csr_array:
    """Sparse matrix sending piecewise-Legendre coefficients to values at the points ``x``."""
    e, t = space.mesh.locate(x)
    p, n = space.degree, space.n
    V = legendre_vander(p, t)
    rows = np.repeat(np.arange(t.size), p + 1)
    cols = (np.arange(p + 1)[None, :] * n + e[:, None]).reshape(-1)
    return sp.csr_array((V.reshape(-1), (rows, cols)), shape=(t.size, (p + 1) * n))


def evaluate_basis(space: Space1D, x) -> np.ndarray:
    """Dense ``len(x) x N`` matrix of basis-function values."""
    return (legendre_evaluation_matrix(space, x) @ conversion_matrix(space)).toarray()


def solve_screened_poisson_1d(space: Space1D, omega: float, f_leg) -> np.ndarray:
    """Coefficients of ``u`` with ``(Delta + omega^2 M) u = R^T M_P f``."""
    omega = _check_omega(space, omega)
    ops = space.operators(omega)
    A = axpy_shift(ops.laplacian, omega * omega, ops.mass)
    factor = reverse_cholesky(A)
    return factor.solve(assemble_rhs_1d(space, f_leg))
