from .bounds import (
    AdiShiftPlan,
    Provenance,
    SpectralInterval,
    adi_shifts,
    cross_ratio,
    estimate_generalized_spectrum,
    iteration_count,
    lemma_spectrum_bounds,
    pencil_spectrum_dense,
)
from .elliptic import elliptic_K, jacobi_dn

__all__ = [
    "AdiShiftPlan",
    "Provenance",
    "SpectralInterval",
    "adi_shifts",
    "cross_ratio",
    "elliptic_K",
    "estimate_generalized_spectrum",
    "iteration_count",
    "jacobi_dn",
    "lemma_spectrum_bounds",
    "pencil_spectrum_dense",
]
