from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .. import config
from ..basis.banded import BandedMatrix, trailing_size
from ..errors import IncompatibleStructure, NotPositiveDefinite
from . import kernels
from .b3 import B3Arrowhead

logger = logging.getLogger(__name__)

# pivots at or below PD_TOLERANCE * max|diag(A)| count as a loss of definiteness
PD_TOLERANCE = 1e-14


@dataclass(frozen=True, eq=False)
class ReverseCholeskyFactor:
    """Lower-triangular ``L`` with ``A = L^T L`` and the arrowhead layout of ``A``.

    ``L0`` is the m x m hat factor, ``M[k]`` the m x n coupling block whose transpose fills block
    row ``k`` of the first block column, and ``tail`` the per-element lower bands
    ``tail[e, i - k, k] = (L_e)[i, k]``.
    """

    L0: BandedMatrix
    M: tuple[BandedMatrix, ...]
    tail: np.ndarray
    m: int
    n: int
    p: int

    @property
    def N(self) -> int:
        return self.m + self.p * self.n

    @property
    def ell(self) -> int:
        return self.tail.shape[1] - 1

    def _split(self, b, name: str):
        b = np.asarray(b, dtype=float)
        if b.shape[0] != self.N:
            raise IncompatibleStructure(f"{name}: expected {self.N} rows, got {b.shape[0]}")
        bs = b.reshape(self.N, trailing_size(b))
        return b.shape, bs[:self.m], bs[self.m:].reshape(self.p, self.n, bs.shape[1])

    def _join(self, shape, x0, x1) -> np.ndarray:
        return np.concatenate([x0, x1.reshape(self.p * self.n, x1.shape[-1])]).reshape(shape)

    def _tail_lower(self, y1: np.ndarray) -> np.ndarray:
        y = np.ascontiguousarray(y1.transpose(1, 0, 2))
        return kernels.batched_band_lower_solve(self.tail, y).transpose(1, 0, 2)

    def _tail_upper(self, y1: np.ndarray) -> np.ndarray:
        y = np.ascontiguousarray(y1.transpose(1, 0, 2))
        return kernels.batched_band_upper_solve(self.tail, y).transpose(1, 0, 2)

    def solve_lower(self, b) -> np.ndarray:
        """``L^{-1} b`` for a vector or a stack of columns."""
        shape, y0, y1 = self._split(b, "solve_lower")
        x0 = kernels.band_lower_solve(self.L0.lower_band(), np.ascontiguousarray(y0))
        r1 = y1.copy()
        for k, Mk in enumerate(self.M):
            r1[k] -= Mk.rmatvec(x0)
        return self._join(shape, x0, self._tail_lower(r1))

    def solve_upper(self, b) -> np.ndarray:
        """``L^{-T} b`` for a vector or a stack of columns."""
        shape, y0, y1 = self._split(b, "solve_upper")
        x1 = self._tail_upper(y1)
        r0 = y0.copy()
        for k, Mk in enumerate(self.M):
            r0 -= Mk.matvec(x1[k])
        x0 = kernels.band_upper_solve(self.L0.lower_band(), np.ascontiguousarray(r0))
        return self._join(shape, x0, x1)

    def solve(self, b) -> np.ndarray:
        """``A^{-1} b = L^{-1} L^{-T} b``."""
        return self.solve_lower(self.solve_upper(b))

    def to_dense(self) -> np.ndarray:
        m, n, p = self.m, self.n, self.p
        out = np.zeros((self.N, self.N))
        out[:m, :m] = self.L0.to_dense()
        for k, Mk in enumerate(self.M):
            out[m + k * n:m + (k + 1) * n, :m] = Mk.to_dense().T
        elems = np.arange(n)
        for off in range(self.ell + 1):
            for k in range(p - off):
                i = k + off
                out[m + i * n + elems, m + k * n + elems] = self.tail[:, off, k]
        return out

    def logdet(self) -> float:
        """``log det A``."""
        diag = np.concatenate([self.L0.data[0], self.tail[:, 0, :].ravel()])
        return float(2.0 * np.sum(np.log(diag)))


def reverse_cholesky(A: B3Arrowhead, check_symmetry: Optional[bool] = None) -> ReverseCholeskyFactor:
    """Factor a symmetric positive definite arrowhead matrix as ``A = L^T L`` without fill-in.

    The element tails are factored independently, their leading inverse blocks turn the ``B`` blocks
    into the couplings ``M_k``, and the hat block is corrected to ``A0 - sum_k M_k M_k^T`` before its
    own banded factorisation.
    """
    if A.ell != A.u:
        raise IncompatibleStructure(f"symmetric factorisation needs ell == u, got ({A.ell}, {A.u})")
    if check_symmetry is None:
        check_symmetry = config.DEBUG
    if check_symmetry and not A.is_symmetric(rtol=1e-12):
        raise ValueError("reverse Cholesky needs a symmetric matrix")

    started = time.perf_counter()
    m, n, p, ell = A.m, A.n, A.p, A.ell
    scale = float(np.max(np.abs(A.diagonal()))) if A.N else 0.0
    tol = PD_TOLERANCE * scale

    bands = np.ascontiguousarray(A.D[:, A.u:, :])
    tail, fail, pivots = kernels.batched_band_reverse_cholesky(bands, tol)
    bad = np.flatnonzero(fail >= 0)
    if bad.size:
        e = int(bad[0])
        raise NotPositiveDefinite(f"element {e}", int(fail[e]), float(pivots[e]))

    k_eff = min(ell, p)
    M: list[BandedMatrix] = []
    if m and k_eff:
        lead = np.zeros((n, k_eff, k_eff))
        for off in range(k_eff):
            for k in range(k_eff - off):
                lead[:, k + off, k] = tail[:, off, k]
        inv = np.linalg.inv(lead)
        for k in range(k_eff):
            Mk = A.B[k].scale_columns(inv[:, k, k])
            for i in range(k + 1, k_eff):
                Mk = Mk.add(A.B[i].scale_columns(inv[:, i, k]))
            M.append(Mk)

    hat = A.A0
    for Mk in M:
        hat = hat.add(Mk.matmul(Mk.T), -1.0)
    band, row, pivot = kernels.band_reverse_cholesky(np.ascontiguousarray(hat.lower_band()), tol)
    if row >= 0:
        raise NotPositiveDefinite("A0", int(row), float(pivot))
    L0 = BandedMatrix.from_lower_band(band)

    logger.debug(
        "reverse Cholesky of order %d (m=%d, n=%d, p=%d) in %.3e s", A.N, m, n, p, time.perf_counter() - started
    )
    return ReverseCholeskyFactor(L0, tuple(M), tail, m, n, p)
