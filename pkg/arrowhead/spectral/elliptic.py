"""Complete elliptic integral ``K`` and Jacobi ``dn`` for real moduli ``0 <= k < 1``.

Both functions accept the complementary modulus ``kc = sqrt(1 - k^2)`` in place of ``k``; near
``k = 1`` only ``kc`` carries enough digits.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

EPS = float(np.finfo(float).eps)
MAX_LANDEN = 64


def _moduli(k: Optional[float], kc: Optional[float]) -> tuple[float, float]:
    if kc is not None:
        kc = float(kc)
        if not 0.0 < kc <= 1.0:
            raise ValueError(f"complementary modulus must lie in (0, 1], got {kc}")
        return math.sqrt((1.0 - kc) * (1.0 + kc)), kc
    if k is None:
        raise ValueError("either k or kc is required")
    k = float(k)
    if not 0.0 <= k < 1.0:
        raise ValueError(f"elliptic modulus must lie in [0, 1), got {k}")
    return k, math.sqrt((1.0 - k) * (1.0 + k))


def agm(a: float, b: float) -> float:
    """Arithmetic-geometric mean."""
    for _ in range(MAX_LANDEN):
        if abs(a - b) <= EPS * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return a


def elliptic_K(k: Optional[float] = None, kc: Optional[float] = None) -> float:
    """``K(k) = pi / (2 agm(1, kc))``."""
    _, kc = _moduli(k, kc)
    return math.pi / (2.0 * agm(1.0, kc))


def jacobi_dn(z, k: Optional[float] = None, kc: Optional[float] = None):
    """``dn(z, k)`` by the descending Landen transformation; vectorised over ``z``."""
    k, kc = _moduli(k, kc)
    z = np.asarray(z, dtype=float)
    a, c = [1.0], [k]
    b = kc
    while abs(c[-1]) > EPS * a[-1] and len(a) <= MAX_LANDEN:
        a_prev = a[-1]
        a.append(0.5 * (a_prev + b))
        c.append(0.5 * (a_prev - b))
        b = math.sqrt(a_prev * b)
    N = len(a) - 1
    if N == 0:
        return np.ones_like(z)[()]

    phi = 2.0 ** N * a[N] * z
    above = phi
    for j in range(N, 0, -1):
        above, phi = phi, 0.5 * (phi + np.arcsin(c[j] / a[j] * np.sin(phi)))
    return (np.cos(phi) / np.cos(above - phi))[()]
