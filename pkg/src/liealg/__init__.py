"""Exact workbench for finite-dimensional Lie algebras given by structure constants."""

from .core import (
    JacobiError,
    LieAlgebra,
    LieAlgebraError,
    ScalarForm,
    Subspace,
    act,
    bch_truncated,
    bracket,
    direct_sum,
    exterior_derivative,
    is_ideal,
    is_subalgebra,
    quotient,
    validate_jacobi,
)
from .scalars import GaussianRational, format_scalar, parse_scalar

__all__ = [
    "GaussianRational",
    "JacobiError",
    "LieAlgebra",
    "LieAlgebraError",
    "ScalarForm",
    "Subspace",
    "act",
    "bch_truncated",
    "bracket",
    "direct_sum",
    "exterior_derivative",
    "format_scalar",
    "is_ideal",
    "is_subalgebra",
    "parse_scalar",
    "quotient",
    "validate_jacobi",
]

__version__ = "0.1.0"
