from .banded import BandedMatrix
from .legendre import (
    bubble_eval,
    legendre_derivative,
    legendre_eval,
    legendre_mass,
    legendre_vander,
    lowering_matrix,
    reference_mass_bubble,
    reference_weak_laplacian,
)

__all__ = [
    "BandedMatrix",
    "bubble_eval",
    "legendre_derivative",
    "legendre_eval",
    "legendre_mass",
    "legendre_vander",
    "lowering_matrix",
    "reference_mass_bubble",
    "reference_weak_laplacian",
]
