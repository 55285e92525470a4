"""Exact 4-D scissors-congruence certificates for Heron's formula and the identities behind it."""

from .exact_scalar import DomainError, QuadScalar, Rational, parse_rational, quad_arith, quad_make, quad_sign, sqrt_rational
from .heron_pipeline import ChainReport, TriangleDatum, triangle_from_coords, verify_heron

__all__ = [
    "ChainReport",
    "DomainError",
    "QuadScalar",
    "Rational",
    "TriangleDatum",
    "parse_rational",
    "quad_arith",
    "quad_make",
    "quad_sign",
    "sqrt_rational",
    "triangle_from_coords",
    "verify_heron",
]

__version__ = "0.1.0"
