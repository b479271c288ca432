from .poisson import Basis, CoefficientField2D, screened_poisson_plan, solve_screened_poisson_2d
from .solver import AdiPlan, adi_precompute, adi_solve, sylvester_residual, weighted_norm

__all__ = [
    "AdiPlan",
    "Basis",
    "CoefficientField2D",
    "adi_precompute",
    "adi_solve",
    "screened_poisson_plan",
    "solve_screened_poisson_2d",
    "sylvester_residual",
    "weighted_norm",
]
