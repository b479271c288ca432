from .b3 import B3Arrowhead, axpy_shift, matvec
from .cholesky import PD_TOLERANCE, ReverseCholeskyFactor, reverse_cholesky

__all__ = [
    "B3Arrowhead",
    "PD_TOLERANCE",
    "ReverseCholeskyFactor",
    "axpy_shift",
    "matvec",
    "reverse_cholesky",
]
