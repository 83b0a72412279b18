"""Exact rational arithmetic: polynomials, series, quotient rings, nullspaces."""
from .poly import (
    interpolate,
    resultant,
    NEG_INF,
    DiscoveredFactor,
    Poly,
    Rational,
    gcd,
    gcd_many,
    invert_mod,
    lcm,
    rational_roots,
    squarefree_part,
    squarefree_split,
    xgcd,
)
from .series import Series
from .quotient import QuotientRing, Residue
from .matrix import RatMatrix, kernel_basis
from .modular import modular_kernel_basis, rational_reconstruct
from .points import INFINITY, AlgebraicPoint, Location, location_key


__all__ = [
    "INFINITY",
    "Location",
    "location_key",
    "NEG_INF",
    "AlgebraicPoint",
    "DiscoveredFactor",
    "Poly",
    "QuotientRing",
    "RatMatrix",
    "Rational",
    "Residue",
    "Series",
    "gcd",
    "gcd_many",
    "invert_mod",
    "kernel_basis",
    "lcm",
    "modular_kernel_basis",
    "rational_reconstruct",
    "rational_roots",
    "squarefree_part",
    "squarefree_split",
    "xgcd",
    "interpolate",
    "resultant",
]
