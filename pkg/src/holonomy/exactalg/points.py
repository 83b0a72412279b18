"""Locations on the projective line: rationals, algebraic loci, and infinity."""
from __future__ import annotations

from typing import Union

from gmpy2 import mpq

from .poly import Poly, gcd
from .quotient import QuotientRing


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "infinity"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class AlgebraicPoint:
    """All roots of a squarefree, content-free polynomial, handled together."""

    __slots__ = ("min_poly", "description")

    def __init__(self, min_poly: Poly, description: str = ""):
        if min_poly.is_zero() or min_poly.degree < 1:
            raise ValueError("minimal polynomial must have positive degree")
        prim = min_poly.factor_normal()
        if gcd(prim, prim.derivative()).degree > 0:
            raise ValueError("minimal polynomial must be squarefree")
        self.min_poly = prim
        self.description = description or f"roots of {prim}"

    @property
    def ring(self) -> QuotientRing:
        return QuotientRing(self.min_poly)

    @property
    def degree(self) -> int:
        return self.min_poly.degree

    def __eq__(self, other):
        return isinstance(other, AlgebraicPoint) and self.min_poly == other.min_poly

    def __hash__(self):
        return hash(("alg", self.min_poly))

    def __repr__(self):
        return f"AlgebraicPoint({self.min_poly})"

    def __str__(self):
        return f"{self.min_poly} = 0"


Location = Union[mpq, AlgebraicPoint, _Infinity]


def location_key(loc) -> tuple:
    """Sort key: rationals by value, then algebraic loci by degree, then infinity."""
    if loc is INFINITY:
        return (2, 0, ())
    if isinstance(loc, AlgebraicPoint):
        return (1, loc.degree, tuple(loc.min_poly.c))
    return (0, mpq(loc), ())
