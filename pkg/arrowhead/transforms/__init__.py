from .chebyshev import (
    cheb_points,
    chebyshev_analysis,
    chebyshev_synthesis,
    chebyshev_to_legendre,
    fejer_weights,
    leg2cheb_matrix,
    legendre_to_chebyshev,
)
from .plan import (
    TransformPlan,
    analysis_1d,
    analysis_2d,
    hatbubble_to_values,
    moments_2d,
    synthesis_1d,
    synthesis_2d,
)

__all__ = [
    "TransformPlan",
    "analysis_1d",
    "analysis_2d",
    "cheb_points",
    "chebyshev_analysis",
    "chebyshev_synthesis",
    "chebyshev_to_legendre",
    "fejer_weights",
    "hatbubble_to_values",
    "leg2cheb_matrix",
    "legendre_to_chebyshev",
    "moments_2d",
    "synthesis_1d",
    "synthesis_2d",
]
