"""Group-theoretical quantization of phase and modulus.

Numerics for the positive discrete series of SU(1,1): truncated generator
and phase-operator matrices, number-state and coherent-state moments, the
spectral support of the cosine operator, and the two-mode bosonic
realization.
"""
from .coherent import CoherentSpec
from .exceptions import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    NonMonotoneError,
    PhasequantError,
    TruncationError,
)
from .irrep import IrrepParams, OperatorKind, build_operator

__version__ = "0.1.0"

__all__ = [
    "CoherentSpec",
    "IrrepParams",
    "OperatorKind",
    "build_operator",
    "PhasequantError",
    "DomainError",
    "ConvergenceError",
    "TruncationError",
    "NonMonotoneError",
    "ConsistencyError",
]
