from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..errors import IncompatibleStructure


def trailing_size(x: np.ndarray) -> int:
    """Number of columns in ``x`` viewed as ``(x.shape[0], k)``; exact even when ``x`` has no rows."""
    return int(np.prod(x.shape[1:], dtype=int))


@dataclass(frozen=True, eq=False)
class BandedMatrix:
    """Rectangular matrix with lower bandwidth ``lam`` and upper bandwidth ``mu``.

    Entries live in the column-band layout shared with LAPACK and ``scipy.sparse.dia_array``:
    ``data[mu + i - j, j] == A[i, j]``. Slots that fall outside the matrix are kept at zero.
    """

    data: np.ndarray
    rows: int
    lam: int
    mu: int

    def __post_init__(self):
        if self.lam < 0 or self.mu < 0 or self.rows < 0:
            raise ValueError(f"invalid banded shape: rows={self.rows}, lam={self.lam}, mu={self.mu}")
        if self.data.ndim != 2 or self.data.shape[0] != self.lam + self.mu + 1:
            raise IncompatibleStructure(
                f"band data of shape {self.data.shape} does not match bandwidths ({self.lam}, {self.mu})"
            )

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    # ------------------------------------------------------------------ construction
    @classmethod
    def zeros(cls, rows: int, cols: int, lam: int, mu: int) -> "BandedMatrix":
        return cls(np.zeros((lam + mu + 1, cols)), rows, lam, mu)

    @classmethod
    def diagonal(cls, values) -> "BandedMatrix":
        values = np.asarray(values, dtype=float)
        return cls(values.reshape(1, -1).copy(), values.size, 0, 0)

    @classmethod
    def from_lower_band(cls, band: np.ndarray) -> "BandedMatrix":
        """Square lower-triangular banded matrix from ``band[i - j, j] = L[i, j]``."""
        band = np.asarray(band, dtype=float)
        return cls(band.copy(), band.shape[1], band.shape[0] - 1, 0)

    @classmethod
    def from_dense(cls, a, lam: int, mu: int, check: bool = True) -> "BandedMatrix":
        a = np.asarray(a, dtype=float)
        rows, cols = a.shape
        out = cls.zeros(rows, cols, lam, mu)
        for off in range(-lam, mu + 1):
            i = np.arange(max(0, -off), min(rows, cols - off))
            out.data[mu - off, i + off] = a[i, i + off]
        if check and not np.array_equal(out.to_dense(), a):
            raise IncompatibleStructure(f"dense matrix has entries outside bandwidths ({lam}, {mu})")
        return out

    @classmethod
    def from_sparse(cls, s, lam: int, mu: int, check: bool = True) -> "BandedMatrix":
        s = sp.coo_array(s)
        rows, cols = s.shape
        out = cls.zeros(rows, cols, lam, mu)
        off = s.col.astype(np.int64) - s.row.astype(np.int64)
        inside = (off >= -lam) & (off <= mu)
        if check and np.any(s.data[~inside] != 0):
            raise IncompatibleStructure(f"sparse matrix has entries outside bandwidths ({lam}, {mu})")
        np.add.at(out.data, (mu - off[inside], s.col[inside]), s.data[inside])
        return out

    # ------------------------------------------------------------------ conversion
    def offsets(self) -> np.ndarray:
        """Diagonal offsets ``j - i`` of the data rows, top row first."""
        return np.arange(self.mu, -self.lam - 1, -1)

    def to_sparse(self) -> sp.csr_array:
        if self.rows == 0 or self.cols == 0:
            return sp.csr_array((self.rows, self.cols))
        return sp.dia_array((self.data, self.offsets()), shape=self.shape).tocsr()

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for off in range(-self.lam, self.mu + 1):
            i = np.arange(max(0, -off), min(self.rows, self.cols - off))
            out[i, i + off] = self.data[self.mu - off, i + off]
        return out

    def lower_band(self) -> np.ndarray:
        """Lower band ``band[i - j, j] = A[i, j]`` of a square matrix."""
        return np.ascontiguousarray(self.data[self.mu:, :])

    def transpose(self) -> "BandedMatrix":
        out = BandedMatrix.zeros(self.cols, self.rows, self.mu, self.lam)
        for off in range(-self.lam, self.mu + 1):
            i = np.arange(max(0, -off), min(self.rows, self.cols - off))
            out.data[self.lam + off, i] = self.data[self.mu - off, i + off]
        return out

    @property
    def T(self) -> "BandedMatrix":
        return self.transpose()

    # ------------------------------------------------------------------ arithmetic
    def matvec(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.cols:
            raise IncompatibleStructure(f"cannot apply a {self.shape} matrix to {x.shape[0]} entries")
        xs = x.reshape(self.cols, trailing_size(x))
        y = np.zeros((self.rows, xs.shape[1]))
        for off in range(-self.lam, self.mu + 1):
            i0, i1 = max(0, -off), min(self.rows, self.cols - off)
            if i1 <= i0:
                continue
            y[i0:i1] += self.data[self.mu - off, i0 + off:i1 + off, None] * xs[i0 + off:i1 + off]
        return y.reshape((self.rows,) + x.shape[1:])

    def rmatvec(self, x) -> np.ndarray:
        """Product with the transpose."""
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.rows:
            raise IncompatibleStructure(f"cannot apply the transpose of a {self.shape} matrix to {x.shape[0]} entries")
        xs = x.reshape(self.rows, trailing_size(x))
        y = np.zeros((self.cols, xs.shape[1]))
        for off in range(-self.lam, self.mu + 1):
            i0, i1 = max(0, -off), min(self.rows, self.cols - off)
            if i1 <= i0:
                continue
            y[i0 + off:i1 + off] += self.data[self.mu - off, i0 + off:i1 + off, None] * xs[i0:i1]
        return y.reshape((self.cols,) + x.shape[1:])

    def padded(self, lam: int, mu: int) -> "BandedMatrix":
        if lam < self.lam or mu < self.mu:
            raise ValueError("padding cannot shrink a band")
        out = BandedMatrix.zeros(self.rows, self.cols, lam, mu)
        top = mu - self.mu
        out.data[top:top + self.data.shape[0]] = self.data
        return out

    def add(self, other: "BandedMatrix", alpha: float = 1.0) -> "BandedMatrix":
        """``self + alpha * other`` with merged bandwidths."""
        if self.shape != other.shape:
            raise IncompatibleStructure(f"shape mismatch: {self.shape} vs {other.shape}")
        lam, mu = max(self.lam, other.lam), max(self.mu, other.mu)
        out = self.padded(lam, mu)
        top = mu - other.mu
        out.data[top:top + other.data.shape[0]] += alpha * other.data
        return out

    def scaled(self, alpha: float) -> "BandedMatrix":
        return BandedMatrix(alpha * self.data, self.rows, self.lam, self.mu)

    def scale_columns(self, d) -> "BandedMatrix":
        """``A @ diag(d)``."""
        d = np.asarray(d, dtype=float)
        return BandedMatrix(self.data * d[None, :], self.rows, self.lam, self.mu)

    def scale_rows(self, d) -> "BandedMatrix":
        """``diag(d) @ A``."""
        d = np.asarray(d, dtype=float)
        out = BandedMatrix.zeros(self.rows, self.cols, self.lam, self.mu)
        for off in range(-self.lam, self.mu + 1):
            i = np.arange(max(0, -off), min(self.rows, self.cols - off))
            out.data[self.mu - off, i + off] = self.data[self.mu - off, i + off] * d[i]
        return out

    def matmul(self, other: "BandedMatrix") -> "BandedMatrix":
        if self.cols != other.rows:
            raise IncompatibleStructure(f"cannot multiply {self.shape} by {other.shape}")
        lam, mu = self.lam + other.lam, self.mu + other.mu
        if 0 in (self.rows, self.cols, other.cols):
            return BandedMatrix.zeros(self.rows, other.cols, lam, mu)
        return BandedMatrix.from_sparse(self.to_sparse() @ other.to_sparse(), lam, mu)

    def __matmul__(self, other):
        if isinstance(other, BandedMatrix):
            return self.matmul(other)
        return self.matvec(other)

    def symmetrized(self) -> "BandedMatrix":
        """``(A + A^T) / 2``; exactly symmetric storage."""
        if self.rows != self.cols:
            raise IncompatibleStructure("only square matrices can be symmetrized")
        return self.add(self.transpose()).scaled(0.5)
