"""Legendre polynomials, integrated-Legendre bubbles and the single-element matrices on [-1, 1].

The bubble ``W_k = (P_k - P_{k+2}) / (2k + 3)`` vanishes at both endpoints and satisfies
``W_k' = -P_{k+1}``, which is what keeps every reference operator banded.
"""
from __future__ import annotations

import numpy as np

from .banded import BandedMatrix

DOMAIN_TOLERANCE = 1e-12


def _as_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + DOMAIN_TOLERANCE):
        raise ValueError("Legendre evaluation is restricted to [-1, 1]")
    return x


def _check_degree(k: int) -> int:
    if int(k) != k or k < 0:
        raise ValueError(f"degree must be a non-negative integer, got {k}")
    return int(k)


def legendre_vander(p: int, x) -> np.ndarray:
    """Matrix ``[P_0(x), ..., P_p(x)]`` with one row per point."""
    p = _check_degree(p)
    x = _as_points(x).reshape(-1)
    out = np.empty((x.size, p + 1))
    out[:, 0] = 1.0
    if p >= 1:
        out[:, 1] = x
    for k in range(1, p):
        out[:, k + 1] = ((2 * k + 1) * x * out[:, k] - k * out[:, k - 1]) / (k + 1)
    return out


def legendre_eval(k: int, x):
    """``P_k(x)`` by the forward three-term recurrence."""
    k = _check_degree(k)
    x = _as_points(x)
    prev, cur = np.ones_like(x), x.copy()
    if k == 0:
        return prev[()]
    for j in range(1, k):
        prev, cur = cur, ((2 * j + 1) * x * cur - j * prev) / (j + 1)
    return cur[()]


def legendre_derivative(k: int, x):
    """``P_k'(x)`` via ``P_{j+1}' = P_{j-1}' + (2j + 1) P_j``; exact at the endpoints."""
    k = _check_degree(k)
    x = _as_points(x)
    if k == 0:
        return np.zeros_like(x)[()]
    vals = legendre_vander(k, x)
    d_prev, d_cur = np.zeros(vals.shape[0]), np.ones(vals.shape[0])
    for j in range(1, k):
        d_prev, d_cur = d_cur, d_prev + (2 * j + 1) * vals[:, j]
    return d_cur.reshape(x.shape)[()]


def bubble_eval(k: int, x):
    """``W_k(x) = (P_k(x) - P_{k+2}(x)) / (2k + 3)``."""
    k = _check_degree(k)
    x = _as_points(x)
    vals = legendre_vander(k + 2, x)
    return ((vals[:, k] - vals[:, k + 2]) / (2 * k + 3)).reshape(x.shape)[()]


def lowering_matrix(p: int) -> BandedMatrix:
    """``L_W`` with ``[W_0, ..., W_{p-2}] = [P_0, ..., P_p] L_W``; shape (p+1, p-1), bandwidths (2, 0)."""
    if p < 2:
        raise ValueError(f"lowering matrix needs p >= 2, got {p}")
    c = 1.0 / (2 * np.arange(p - 1) + 3)
    data = np.zeros((3, p - 1))
    data[0] = c
    data[2] = -c
    return BandedMatrix(data, p + 1, 2, 0)


def legendre_mass(p: int) -> BandedMatrix:
    """Gram matrix ``diag(2 / (2k + 1))`` of ``P_0, ..., P_p``."""
    p = _check_degree(p)
    return BandedMatrix.diagonal(2.0 / (2 * np.arange(p + 1) + 1))


def reference_weak_laplacian(p: int) -> BandedMatrix:
    """``<W_j', W_k'> = 2 / (2k + 3)`` on the diagonal, k = 0..p-2."""
    if p < 2:
        raise ValueError(f"weak Laplacian needs p >= 2, got {p}")
    return BandedMatrix.diagonal(2.0 / (2 * np.arange(p - 1) + 3))


def reference_mass_bubble(p: int) -> BandedMatrix:
    """``L_W^T M_P L_W`` evaluated on its two nonzero diagonals.

    Offsets of +-1 are structurally zero: ``W_j`` and ``W_{j+1}`` share no Legendre mode.
    """
    if p < 2:
        raise ValueError(f"bubble mass needs p >= 2, got {p}")
    nb = p - 1
    c = 1.0 / (2 * np.arange(nb) + 3)
    m = 2.0 / (2 * np.arange(p + 1) + 1)
    data = np.zeros((5, nb))
    data[2] = c * c * (m[:nb] + m[2:nb + 2])
    off = -c[:-2] * m[2:nb] * c[2:]
    data[0, 2:] = off  # (j, j+2) stored at column j+2
    data[4, :-2] = off  # (j+2, j) stored at column j
    return BandedMatrix(data, nb, 2, 2)
