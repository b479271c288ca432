from __future__ import annotations

import numpy as np
import pytest

from arrowhead.linalg.b3 import B3Arrowhead


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


def random_spd_arrowhead(rng: np.random.Generator, m: int, n: int, p: int, bw: int, lam: int, mu: int) -> B3Arrowhead:
    """Strictly diagonally dominant symmetric matrix filling the whole structure."""
    mask = B3Arrowhead.pattern(m, n, p, bw, bw, lam, mu).to_dense() != 0
    S = rng.uniform(-1.0, 1.0, mask.shape) * mask
    S = 0.5 * (S + S.T)
    S[np.diag_indices_from(S)] = np.abs(S).sum(axis=1) + 1.0
    return B3Arrowhead.from_dense(S, m, n, p, bw, bw, lam, mu)


@pytest.fixture
def spd_arrowhead(rng):
    def make(m=5, n=4, p=6, bw=2, lam=1, mu=1):
        return random_spd_arrowhead(rng, m, n, p, bw, lam, mu)

    return make


def kron_solve(A, B, C, D, F):
    """Dense solve of ``A U C - D U B = F`` through the column-major vectorisation."""
    A, B, C, D = (X.to_dense() for X in (A, B, C, D))
    K = np.kron(C.T, A) - np.kron(B.T, D)
    u = np.linalg.solve(K, F.reshape(-1, order="F"))
    return u.reshape(F.shape, order="F")
