from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.io
import scipy.sparse as sp

from ..basis.banded import BandedMatrix, trailing_size
from ..errors import IncompatibleStructure

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class B3Arrowhead:
    """Banded-block-banded arrowhead matrix.

    Layout, with ``m`` hat unknowns followed by ``p`` interlaced blocks of ``n`` element unknowns::

        [ A0   B_1 .. B_u   0 ]
        [ C_1                 ]
        [ :        D          ]
        [ C_ell               ]
        [ 0                   ]

    ``A0`` is m x m with bandwidths (lam + mu, lam + mu), each ``B_k`` is m x n with (lam, mu),
    each ``C_k`` is n x m with (mu, lam). ``D = D_1 (+) ... (+) D_n`` is stored per element as band
    data of shape ``(n, ell + u + 1, p)`` with ``D[e, u + i - j, j] = (D_e)[i, j]``, which makes every
    interior block diagonal.
    """

    A0: BandedMatrix
    B: tuple[BandedMatrix, ...]
    C: tuple[BandedMatrix, ...]
    D: np.ndarray
    ell: int
    u: int
    lam: int
    mu: int

    def __post_init__(self):
        object.__setattr__(self, "B", tuple(self.B))
        object.__setattr__(self, "C", tuple(self.C))
        m = self.A0.rows
        if self.A0.cols != m:
            raise IncompatibleStructure(f"A0 must be square, got {self.A0.shape}")
        if self.D.ndim != 3 or self.D.shape[1] != self.ell + self.u + 1:
            raise IncompatibleStructure(f"element data of shape {self.D.shape} does not match block bandwidths")
        n, p = self.D.shape[0], self.D.shape[2]
        if len(self.B) != self.u or len(self.C) != self.ell:
            raise IncompatibleStructure(f"expected {self.u} B blocks and {self.ell} C blocks")
        if self.ell > p or self.u > p:
            raise IncompatibleStructure(f"block bandwidths ({self.ell}, {self.u}) exceed {p} blocks")
        for blk in self.B:
            if blk.shape != (m, n):
                raise IncompatibleStructure(f"B block of shape {blk.shape}, expected {(m, n)}")
        for blk in self.C:
            if blk.shape != (n, m):
                raise IncompatibleStructure(f"C block of shape {blk.shape}, expected {(n, m)}")

    @property
    def m(self) -> int:
        return self.A0.rows

    @property
    def n(self) -> int:
        return self.D.shape[0]

    @property
    def p(self) -> int:
        return self.D.shape[2]

    @property
    def N(self) -> int:
        return self.m + self.p * self.n

    @property
    def shape(self) -> tuple[int, int]:
        return (self.N, self.N)

    def structure(self) -> tuple[int, int, int, int, int, int, int]:
        return (self.m, self.n, self.p, self.ell, self.u, self.lam, self.mu)

    # ------------------------------------------------------------------ construction
    @classmethod
    def zeros(cls, m: int, n: int, p: int, ell: int, u: int, lam: int, mu: int) -> "B3Arrowhead":
        return cls(
            BandedMatrix.zeros(m, m, lam + mu, lam + mu),
            tuple(BandedMatrix.zeros(m, n, lam, mu) for _ in range(u)),
            tuple(BandedMatrix.zeros(n, m, mu, lam) for _ in range(ell)),
            np.zeros((n, ell + u + 1, p)),
            ell, u, lam, mu,
        )

    @classmethod
    def pattern(cls, m: int, n: int, p: int, ell: int, u: int, lam: int, mu: int) -> "B3Arrowhead":
        """Matrix with a one in every slot the structure admits."""
        return cls(
            BandedMatrix(np.ones((2 * (lam + mu) + 1, m)), m, lam + mu, lam + mu),
            tuple(BandedMatrix(np.ones((lam + mu + 1, n)), m, lam, mu) for _ in range(u)),
            tuple(BandedMatrix(np.ones((lam + mu + 1, m)), n, mu, lam) for _ in range(ell)),
            np.ones((n, ell + u + 1, p)),
            ell, u, lam, mu,
        )

    @classmethod
    def from_sparse(cls, s, m: int, n: int, p: int, ell: int, u: int, lam: int, mu: int,
                    check: bool = True) -> "B3Arrowhead":
        s = sp.csr_array(s)
        N = m + p * n
        if s.shape != (N, N):
            raise IncompatibleStructure(f"matrix of shape {s.shape} does not match m + p*n = {N}")
        A0 = BandedMatrix.from_sparse(s[:m, :m], lam + mu, lam + mu, check=check)
        B = tuple(
            BandedMatrix.from_sparse(s[:m, m + k * n:m + (k + 1) * n], lam, mu, check=check) for k in range(u)
        )
        C = tuple(
            BandedMatrix.from_sparse(s[m + k * n:m + (k + 1) * n, :m], mu, lam, check=check) for k in range(ell)
        )
        if check:
            stray = s[:m, m + u * n:].count_nonzero() + s[m + ell * n:, :m].count_nonzero()
            if stray:
                raise IncompatibleStructure("arrowhead entries beyond the declared block bandwidths")

        tail = sp.coo_array(s[m:, m:])
        i, e = np.divmod(tail.row.astype(np.int64), n)
        j, e2 = np.divmod(tail.col.astype(np.int64), n)
        off = j - i
        inside = (e == e2) & (off >= -ell) & (off <= u)
        if check and np.any(tail.data[~inside] != 0):
            raise IncompatibleStructure("element tail has entries outside the diagonal-block pattern")
        D = np.zeros((n, ell + u + 1, p))
        np.add.at(D, (e[inside], u - off[inside], j[inside]), tail.data[inside])
        return cls(A0, B, C, D, ell, u, lam, mu)

    @classmethod
    def from_dense(cls, a, m: int, n: int, p: int, ell: int, u: int, lam: int, mu: int,
                   check: bool = True) -> "B3Arrowhead":
        return cls.from_sparse(sp.csr_array(np.asarray(a, dtype=float)), m, n, p, ell, u, lam, mu, check=check)

    # ------------------------------------------------------------------ conversion
    def _tail_coo(self):
        m, n, p, ell, u = self.m, self.n, self.p, self.ell, self.u
        rows, cols, vals = [], [], []
        elems = np.arange(n)
        for off in range(-ell, u + 1):
            i = np.arange(max(0, -off), min(p, p - off))
            if i.size == 0:
                continue
            ii, ee = np.meshgrid(i, elems, indexing="ij")
            rows.append((m + ii * n + ee).ravel())
            cols.append((m + (ii + off) * n + ee).ravel())
            vals.append(self.D[:, u - off, i + off].T.ravel())
        if not rows:
            return np.zeros(0, int), np.zeros(0, int), np.zeros(0)
        return np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)

    def to_sparse(self) -> sp.csr_array:
        m, n = self.m, self.n
        head = sp.coo_array(self.A0.to_sparse())
        rows, cols, vals = [head.row], [head.col], [head.data]
        for k, blk in enumerate(self.B):
            c = sp.coo_array(blk.to_sparse())
            rows.append(c.row)
            cols.append(c.col + m + k * n)
            vals.append(c.data)
        for k, blk in enumerate(self.C):
            c = sp.coo_array(blk.to_sparse())
            rows.append(c.row + m + k * n)
            cols.append(c.col)
            vals.append(c.data)
        r, c, v = self._tail_coo()
        rows.append(r)
        cols.append(c)
        vals.append(v)
        return sp.coo_array(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=self.shape
        ).tocsr()

    def to_dense(self) -> np.ndarray:
        return self.to_sparse().toarray()

    def pattern_mask(self) -> np.ndarray:
        return B3Arrowhead.pattern(*self.structure()).to_dense() != 0

    def dump(self, path) -> None:
        """Write a matrix-market file with the block structure in the header comment."""
        m, n, p, ell, u, lam, mu = self.structure()
        comment = f" B3Arrowhead m={m} n={n} p={p} ell={ell} u={u} lam={lam} mu={mu}"
        scipy.io.mmwrite(path, sp.coo_array(self.to_sparse()), comment=comment)
        logger.debug("wrote %dx%d arrowhead matrix to %s", self.N, self.N, path)

    # ------------------------------------------------------------------ algebra
    def is_symmetric(self, rtol: float = 0.0) -> bool:
        if self.ell != self.u:
            return False
        s = self.to_sparse()
        diff = abs(s - s.T)
        worst = diff.max() if diff.nnz else 0.0
        scale = abs(s).max() if s.nnz else 0.0
        return bool(worst <= rtol * scale)

    def diagonal(self) -> np.ndarray:
        tail = self.D[:, self.u, :].T.reshape(-1)
        return np.concatenate([self.A0.data[self.A0.mu], tail])

    def matvec(self, x) -> np.ndarray:
        """``A @ x`` for a vector or a stack of columns."""
        x = np.asarray(x, dtype=float)
        if x.shape[0] != self.N:
            raise IncompatibleStructure(f"cannot apply an order-{self.N} matrix to {x.shape[0]} entries")
        m, n, p = self.m, self.n, self.p
        xs = x.reshape(self.N, trailing_size(x))
        x0 = xs[:m]
        x1 = xs[m:].reshape(p, n, xs.shape[1])

        y0 = self.A0.matvec(x0)
        for k, blk in enumerate(self.B):
            y0 += blk.matvec(x1[k])
        y1 = np.zeros_like(x1)
        for k, blk in enumerate(self.C):
            y1[k] += blk.matvec(x0)
        for off in range(-self.ell, self.u + 1):
            i0, i1 = max(0, -off), min(p, p - off)
            if i1 <= i0:
                continue
            coef = self.D[:, self.u - off, i0 + off:i1 + off].T
            y1[i0:i1] += coef[:, :, None] * x1[i0 + off:i1 + off]
        return np.concatenate([y0, y1.reshape(p * n, xs.shape[1])]).reshape(x.shape)

    def __matmul__(self, x):
        return self.matvec(x)

    def padded(self, ell: int, u: int, lam: int, mu: int) -> "B3Arrowhead":
        if ell < self.ell or u < self.u or lam < self.lam or mu < self.mu:
            raise ValueError("padding cannot shrink a structure")
        m, n, p = self.m, self.n, self.p
        B = [blk.padded(lam, mu) for blk in self.B]
        B += [BandedMatrix.zeros(m, n, lam, mu) for _ in range(u - self.u)]
        C = [blk.padded(mu, lam) for blk in self.C]
        C += [BandedMatrix.zeros(n, m, mu, lam) for _ in range(ell - self.ell)]
        D = np.zeros((n, ell + u + 1, p))
        top = u - self.u
        D[:, top:top + self.D.shape[1]] = self.D
        return B3Arrowhead(self.A0.padded(lam + mu, lam + mu), tuple(B), tuple(C), D, ell, u, lam, mu)

    def scaled(self, alpha: float) -> "B3Arrowhead":
        return B3Arrowhead(
            self.A0.scaled(alpha),
            tuple(blk.scaled(alpha) for blk in self.B),
            tuple(blk.scaled(alpha) for blk in self.C),
            alpha * self.D,
            self.ell, self.u, self.lam, self.mu,
        )


def matvec(A: B3Arrowhead, x) -> np.ndarray:
    return A.matvec(x)


def axpy_shift(A: B3Arrowhead, sigma: float, B: B3Arrowhead) -> B3Arrowhead:
    """``A + sigma * B`` with the pairwise maximum of the bandwidths."""
    if (A.m, A.n, A.p) != (B.m, B.n, B.p):
        raise IncompatibleStructure(
            f"incompatible arrowhead structures (m, n, p) = {(A.m, A.n, A.p)} and {(B.m, B.n, B.p)}"
        )
    ell, u = max(A.ell, B.ell), max(A.u, B.u)
    lam, mu = max(A.lam, B.lam), max(A.mu, B.mu)
    Ap, Bp = A.padded(ell, u, lam, mu), B.padded(ell, u, lam, mu)
    if sigma == 0:
        return Ap
    return B3Arrowhead(
        Ap.A0.add(Bp.A0, sigma),
        tuple(x.add(y, sigma) for x, y in zip(Ap.B, Bp.B)),
        tuple(x.add(y, sigma) for x, y in zip(Ap.C, Bp.C)),
        Ap.D + sigma * Bp.D,
        ell, u, lam, mu,
    )
