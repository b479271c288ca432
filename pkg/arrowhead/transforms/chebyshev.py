"""Chebyshev grids of the first kind, DCT-based analysis and exact Chebyshev-Legendre conversion.

Grid values are ordered ascending, as returned by :func:`cheb_points`. Every transform acts along
axis 0 and leaves trailing axes alone.
"""
from __future__ import annotations

import functools

import numpy as np
import scipy.fft
import scipy.linalg

from ..basis.legendre import legendre_vander

METHODS = ("fft", "direct")


def cheb_points(p: int) -> np.ndarray:
    """``sin(pi (p - 2k + 1) / (2p))`` for ``k = p, ..., 1``."""
    if p < 1:
        raise ValueError(f"need at least one point, got {p}")
    k = np.arange(p, 0, -1)
    return np.sin(np.pi * (p - 2 * k + 1) / (2 * p))


@functools.lru_cache(maxsize=64)
def _cos_matrix(p: int) -> np.ndarray:
    # rows: degree k; columns: descending point j
    k = np.arange(p)[:, None]
    j = np.arange(p)[None, :]
    out = np.cos(np.pi * k * (2 * j + 1) / (2 * p))
    out.setflags(write=False)
    return out


def _check_method(method: str) -> None:
    if method not in METHODS:
        raise ValueError(f"unknown transform method {method!r}, expected one of {METHODS}")


def chebyshev_analysis(values, method: str = "fft") -> np.ndarray:
    """Chebyshev coefficients of the interpolant through values on the ascending grid."""
    _check_method(method)
    values = np.asarray(values, dtype=float)
    p = values.shape[0]
    desc = values[::-1]
    if method == "fft":
        c = scipy.fft.dct(desc, type=2, axis=0) / p
    else:
        c = 2.0 / p * np.tensordot(_cos_matrix(p), desc, axes=(1, 0))
    c[0] *= 0.5
    return c


def chebyshev_synthesis(coeffs, method: str = "fft") -> np.ndarray:
    """Values on the ascending grid of the expansion ``sum_k c_k T_k``."""
    _check_method(method)
    c = np.array(coeffs, dtype=float)
    if method == "fft":
        c[1:] *= 0.5
        desc = scipy.fft.dct(c, type=3, axis=0)
    else:
        desc = np.tensordot(_cos_matrix(c.shape[0]).T, c, axes=(1, 0))
    return desc[::-1]


@functools.lru_cache(maxsize=64)
def leg2cheb_matrix(p: int) -> np.ndarray:
    """Upper-triangular ``T`` with column ``d`` holding the Chebyshev coefficients of ``P_d``, d < p."""
    V = legendre_vander(p - 1, cheb_points(p))
    T = np.triu(chebyshev_analysis(V, method="direct"))
    k, d = np.indices(T.shape)
    T[(k + d) % 2 == 1] = 0.0
    T.setflags(write=False)
    return T


def legendre_to_chebyshev(coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    T = leg2cheb_matrix(coeffs.shape[0])
    return np.tensordot(T, coeffs, axes=(1, 0))


def chebyshev_to_legendre(coeffs) -> np.ndarray:
    coeffs = np.asarray(coeffs, dtype=float)
    T = leg2cheb_matrix(coeffs.shape[0])
    flat = coeffs.reshape(coeffs.shape[0], -1)
    return scipy.linalg.solve_triangular(T, flat, lower=False).reshape(coeffs.shape)


@functools.lru_cache(maxsize=64)
def fejer_weights(p: int) -> np.ndarray:
    """First-kind Fejer quadrature weights on :func:`cheb_points`; exact for degree < p."""
    theta = np.pi * (2 * np.arange(p) + 1) / (2 * p)
    k = np.arange(1, p // 2 + 1)
    w = 2.0 / p * (1.0 - 2.0 * np.cos(2.0 * np.outer(theta, k)) @ (1.0 / (4.0 * k * k - 1.0)))
    w = w[::-1].copy()
    w.setflags(write=False)
    return w
