"""Compiled banded kernels.

Every band argument uses the lower-band layout ``band[i - j, j] = L[i, j]`` and right-hand sides are
stacks of columns of shape ``(N, K)``. The batched variants map over a leading element axis.
"""
from __future__ import annotations

import functools

import numba
import numpy as np

jit = functools.partial(numba.njit, cache=True)


@jit
def band_reverse_cholesky(lb, tol):
    """Lower band of ``L`` with ``A = L^T L``, eliminating from the bottom-right corner.

    Returns ``(L, row, pivot)``; ``row`` is -1 on success, otherwise the row whose pivot fell to
    ``tol`` or below.
    """
    b = lb.shape[0] - 1
    N = lb.shape[1]
    L = np.zeros((b + 1, N))
    for j in range(N - 1, -1, -1):
        s = lb[0, j]
        for k in range(j + 1, min(N, j + b + 1)):
            s -= L[k - j, j] * L[k - j, j]
        if not s > tol:
            return L, j, s
        d = np.sqrt(s)
        L[0, j] = d
        for i in range(j - 1, max(-1, j - b - 1), -1):
            s = lb[j - i, i]
            for k in range(j + 1, min(N, i + b + 1)):
                s -= L[k - j, j] * L[k - i, i]
            L[j - i, i] = s / d
    return L, -1, 0.0


@jit(parallel=True)
def batched_band_reverse_cholesky(lbs, tol):
    n = lbs.shape[0]
    out = np.zeros(lbs.shape)
    fail = np.full(n, -1, dtype=np.int64)
    pivots = np.zeros(n)
    for e in numba.prange(n):
        L, row, pivot = band_reverse_cholesky(lbs[e], tol)
        out[e] = L
        fail[e] = row
        pivots[e] = pivot
    return out, fail, pivots


@jit
def band_lower_solve(Lb, y):
    """``L^{-1} y``."""
    b = Lb.shape[0] - 1
    N, K = y.shape
    x = y.copy()
    for i in range(N):
        for j in range(max(0, i - b), i):
            c = Lb[i - j, j]
            for r in range(K):
                x[i, r] -= c * x[j, r]
        d = Lb[0, i]
        for r in range(K):
            x[i, r] /= d
    return x


@jit
def band_upper_solve(Lb, y):
    """``L^{-T} y``."""
    b = Lb.shape[0] - 1
    N, K = y.shape
    x = y.copy()
    for i in range(N - 1, -1, -1):
        for k in range(i + 1, min(N, i + b + 1)):
            c = Lb[k - i, i]
            for r in range(K):
                x[i, r] -= c * x[k, r]
        d = Lb[0, i]
        for r in range(K):
            x[i, r] /= d
    return x


@jit(parallel=True)
def batched_band_lower_solve(Lbs, Y):
    out = np.empty(Y.shape)
    for e in numba.prange(Lbs.shape[0]):
        out[e] = band_lower_solve(Lbs[e], Y[e])
    return out


@jit(parallel=True)
def batched_band_upper_solve(Lbs, Y):
    out = np.empty(Y.shape)
    for e in numba.prange(Lbs.shape[0]):
        out[e] = band_upper_solve(Lbs[e], Y[e])
    return out
