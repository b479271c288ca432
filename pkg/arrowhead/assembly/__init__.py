from .mesh import BoundaryCondition, Mesh1D, Space1D, deinterlace, interlace
from .operators import (
    Operators1D,
    assemble_operators,
    assemble_rhs_1d,
    assemble_rhs_2d,
    conversion_matrix,
    derivative_matrix,
    evaluate_basis,
    legendre_evaluation_matrix,
    legendre_weights,
    solve_screened_poisson_1d,
)

__all__ = [
    "BoundaryCondition",
    "Mesh1D",
    "Operators1D",
    "Space1D",
    "assemble_operators",
    "assemble_rhs_1d",
    "assemble_rhs_2d",
    "conversion_matrix",
    "deinterlace",
    "derivative_matrix",
    "evaluate_basis",
    "interlace",
    "legendre_evaluation_matrix",
    "legendre_weights",
    "solve_screened_poisson_1d",
]
