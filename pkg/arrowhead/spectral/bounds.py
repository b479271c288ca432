"""Spectral intervals of screened-Poisson pencils and the ADI shift sequences built on them."""
from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .. import config
from ..assembly.mesh import BoundaryCondition
from .elliptic import elliptic_K, jacobi_dn

logger = logging.getLogger(__name__)

# relative widening applied to dense eigenvalue estimates
SPECTRUM_MARGIN = 0.01


class Provenance(str, enum.Enum):
    ANALYTIC = "analytic"
    DENSE_EIG = "dense-eig"


@dataclass(frozen=True)
class SpectralInterval:
    lo: float
    hi: float
    provenance: Provenance = Provenance.ANALYTIC

    def __post_init__(self):
        if not (0.0 < self.lo <= self.hi) or not math.isfinite(self.hi):
            raise ValueError(f"spectral interval must satisfy 0 < lo <= hi < inf, got [{self.lo}, {self.hi}]")

    def reciprocal(self) -> "SpectralInterval":
        """Interval of ``1 / sigma``, i.e. of the pencil with its two matrices swapped."""
        return SpectralInterval(1.0 / self.hi, 1.0 / self.lo, self.provenance)

    def scaled(self, alpha: float) -> "SpectralInterval":
        if alpha <= 0:
            raise ValueError(f"scale factor must be positive, got {alpha}")
        return SpectralInterval(alpha * self.lo, alpha * self.hi, self.provenance)

    def contains(self, values, rtol: float = 0.0) -> bool:
        values = np.asarray(values, dtype=float)
        return bool(np.all(values >= self.lo * (1 - rtol)) and np.all(values <= self.hi * (1 + rtol)))


def lemma_spectrum_bounds(
    h: float, p: int, omega: float, bc: BoundaryCondition | str, length: float
) -> SpectralInterval:
    """Interval containing ``sigma(M, Delta + (omega^2 / 2) M)``.

    The lower end is ``2h^2 / (24p^4 + omega^2 h^2)``. The upper end caps the Poincare constant of the
    interval by ``max(1, 2 / omega^2)``; a zero Dirichlet end gives ``L^2 / pi^2`` with both ends and
    ``4L^2 / pi^2`` with one.
    """
    bc = BoundaryCondition(bc)
    if h <= 0 or length <= 0 or h > length * (1 + 1e-12):
        raise ValueError(f"need 0 < h <= length, got h={h}, length={length}")
    if p < 1:
        raise ValueError(f"degree must be positive, got {p}")
    if omega < 0:
        raise ValueError(f"omega must be non-negative, got {omega}")
    if omega == 0 and not bc.definite:
        raise ValueError("the Neumann problem needs omega > 0")

    lo = 2.0 * h * h / (24.0 * p ** 4 + omega * omega * h * h)
    cap = math.inf if omega == 0 else max(1.0, 2.0 / (omega * omega))
    if bc is BoundaryCondition.DIRICHLET:
        hi = min(length ** 2 / math.pi ** 2, cap)
    elif bc is BoundaryCondition.FULL:
        hi = cap
    else:
        hi = min(4.0 * length ** 2 / math.pi ** 2, cap)
    return SpectralInterval(lo, hi, Provenance.ANALYTIC)


def iteration_count(gamma: float, eps: float) -> int:
    """``J = ceil(log(16 gamma) log(4 / eps) / pi^2)``."""
    if gamma <= 1:
        raise ValueError(f"cross-ratio must exceed 1, got {gamma}")
    if not 0 < eps < 1:
        raise ValueError(f"tolerance must lie in (0, 1), got {eps}")
    return max(1, math.ceil(math.log(16.0 * gamma) * math.log(4.0 / eps) / math.pi ** 2))


@dataclass(frozen=True, eq=False)
class AdiShiftPlan:
    a: float
    b: float
    c: float
    d: float
    gamma: float
    J: int
    p: np.ndarray
    q: np.ndarray
    eps: float
    fallback: bool = False


def cross_ratio(a: float, b: float, c: float, d: float) -> float:
    return abs(c - a) * abs(d - b) / (abs(c - b) * abs(d - a))


def _mobius(z, a: float, b: float, c: float, d: float, alpha: float):
    """Map sending ``-alpha, -1, 1, alpha`` to ``a, b, c, d``."""
    s = -2.0 * (z + alpha) / ((z - 1.0) * (alpha - 1.0))
    return (s * c * (b - a) - a * (b - c)) / (s * (b - a) - (b - c))


def _geometric_shifts(lo: float, hi: float, J: int) -> np.ndarray:
    t = (2 * np.arange(1, J + 1) - 1) / (2 * J)
    return lo * (hi / lo) ** t


def adi_shifts(a: float, b: float, c: float, d: float, eps: float, heuristic: bool = False) -> AdiShiftPlan:
    """Zolotarev-optimal shifts for ``sigma(A, D)`` in ``[a, b]`` (positive) and ``sigma(B, C)`` in ``[c, d]`` (negative)."""
    ends = np.array([a, b, c, d], dtype=float)
    if not np.all(np.isfinite(ends)):
        raise ValueError("interval ends must be finite")
    if not (0 < a <= b and c <= d < 0):
        raise ValueError(f"need 0 < a <= b and c <= d < 0, got [{a}, {b}] and [{c}, {d}]")
    if not 0 < eps < 1:
        raise ValueError(f"tolerance must lie in (0, 1), got {eps}")
    gamma = cross_ratio(a, b, c, d)
    if gamma <= 1:
        raise ValueError(f"degenerate intervals: cross-ratio {gamma} <= 1")
    J = iteration_count(gamma, eps)

    fallback = heuristic
    if not heuristic:
        alpha = -1.0 + 2.0 * gamma + 2.0 * math.sqrt(gamma * gamma - gamma)
        kc = 1.0 / alpha
        K = elliptic_K(kc=kc)
        dn = jacobi_dn((2 * np.arange(1, J + 1) - 1) * K / (2 * J), kc=kc)
        p = _mobius(-alpha * dn, a, b, c, d, alpha)
        q = _mobius(alpha * dn, a, b, c, d, alpha)
        slack = 1e-10
        inside = (
            np.all(np.isfinite(p)) and np.all(np.isfinite(q))
            and np.all(p >= a * (1 - slack)) and np.all(p <= b * (1 + slack))
            and np.all(q >= c * (1 + slack)) and np.all(q <= d * (1 - slack))
        )
        if not inside:
            logger.warning("Zolotarev shifts left their intervals (gamma=%.3e); using geometric shifts", gamma)
            fallback = True
    if fallback:
        p = _geometric_shifts(a, b, J)
        q = -_geometric_shifts(-d, -c, J)

    p = np.clip(p, a, b)
    q = np.clip(q, c, d)
    assert np.all(p > 0) and np.all(q < 0)
    logger.debug("ADI shifts: gamma=%.4e, J=%d, fallback=%s", gamma, J, fallback)
    return AdiShiftPlan(a, b, c, d, gamma, J, p, q, eps, fallback)


def _dense(X) -> np.ndarray:
    return X.to_dense() if hasattr(X, "to_dense") else np.asarray(X, dtype=float)


def pencil_spectrum_dense(A, D) -> tuple[float, float]:
    """Smallest and largest generalised eigenvalue of the symmetric pencil ``(A, D)``, ``D`` definite."""
    w = scipy.linalg.eigh(_dense(A), _dense(D), eigvals_only=True)
    return float(w[0]), float(w[-1])


def estimate_generalized_spectrum(
    A, D, interval: Optional[SpectralInterval] = None, margin: float = SPECTRUM_MARGIN
) -> SpectralInterval:
    """Interval containing the positive spectrum ``sigma(A, D)``.

    A known analytic ``interval`` is returned as is; otherwise the dense pencil is solved for orders
    up to ``config.DENSE_SPECTRUM_LIMIT`` and widened by ``margin`` on each end.
    """
    if interval is not None:
        return interval
    order = A.shape[0]
    if order > config.DENSE_SPECTRUM_LIMIT:
        raise ValueError(
            f"no analytic bounds for an order-{order} pencil and the dense limit is {config.DENSE_SPECTRUM_LIMIT}"
        )
    lo, hi = pencil_spectrum_dense(A, D)
    if lo <= 0:
        raise ValueError(f"pencil spectrum is not positive (smallest eigenvalue {lo:.3e})")
    logger.debug("dense pencil spectrum of order %d: [%.6e, %.6e]", order, lo, hi)
    return SpectralInterval(lo * (1 - margin), hi * (1 + margin), Provenance.DENSE_EIG)
