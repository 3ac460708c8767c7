"""Exact pre-Bloch-group invariants of spherical CR triangulations."""

from .numfield import (
    NumberField,
    FieldElement,
    PrimeIdealLabel,
    QQ,
    define_field,
    extend_with_sqrt,
    gaussian_field,
    primes_above,
    quadratic_imaginary,
    valuation,
    valuations,
)

__all__ = [
    "NumberField", "FieldElement", "PrimeIdealLabel", "QQ", "define_field",
    "extend_with_sqrt", "gaussian_field", "primes_above",
    "quadratic_imaginary", "valuation", "valuations",
]

__version__ = "0.1.0"
