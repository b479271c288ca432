from __future__ import annotations

from typing import Any, Optional


class ArrowheadError(Exception):
    """Root of the package's solver failures."""


class NotPositiveDefinite(ArrowheadError):
    """A banded reverse Cholesky met a pivot at or below the definiteness threshold."""

    def __init__(self, where: str, index: int, pivot: float):
        self.where = where
        self.index = index
        self.pivot = pivot
        super().__init__(f"matrix is not positive definite: pivot {pivot:.3e} at row {index} of {where}")


class MaxIterExceeded(ArrowheadError):
    def __init__(self, method: str, iterations: int, residual: float, last_iterate: Optional[Any] = None):
        self.method = method
        self.iterations = iterations
        self.residual = residual
        self.last_iterate = last_iterate
        super().__init__(f"{method} did not converge in {iterations} iterations (relative residual {residual:.3e})")


class IncompatibleStructure(ArrowheadError, ValueError):
    """Block structures or array shapes do not fit together."""


class InvalidParameterError(ArrowheadError, ValueError):
    """A problem parameter lies outside the range the construction is defined for."""
