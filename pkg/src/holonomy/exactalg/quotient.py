"""Arithmetic in ``Q[w]/(p)`` for squarefree ``p`` (points with algebraic coordinates).

Inversion uses dynamic evaluation: if an element turns out to be a zero
divisor, ``DiscoveredFactor`` propagates so the caller can split the point.
"""
from __future__ import annotations

from gmpy2 import mpq

from .poly import DiscoveredFactor, Poly, _q, invert_mod, squarefree_split


class QuotientRing:
    """``Q[w]/(modulus)``; the modulus is stored monic."""

    def __init__(self, modulus: Poly):
        if modulus.degree == 0 or modulus.is_zero():
            raise ValueError("modulus must have positive degree")
        self.modulus = modulus.monic()

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def __eq__(self, other):
        return isinstance(other, QuotientRing) and self.modulus == other.modulus

    def __hash__(self):
        return hash(self.modulus)

    def __repr__(self):
        return f"QuotientRing({self.modulus.primitive()})"

    def __call__(self, value) -> "Residue":
        if isinstance(value, Residue):
            return value
        if not isinstance(value, Poly):
            value = Poly([value])
        return Residue(self, value % self.modulus)

    @property
    def gen(self) -> "Residue":
        return self(Poly.x())

    def zero(self) -> "Residue":
        return Residue(self, Poly())

    def one(self) -> "Residue":
        return self(1)


class Residue:
    """Element of a ``QuotientRing``, kept reduced."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: QuotientRing, poly: Poly):
        self.ring = ring
        self.poly = poly

    def _lift(self, other) -> Poly:
        if isinstance(other, Residue):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("residues from different rings")
            return other.poly
        if isinstance(other, Poly):
            return other % self.ring.modulus
        return Poly([_q(other)])

    def __add__(self, other):
        return Residue(self.ring, self.poly + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Residue(self.ring, self.poly - self._lift(other))

    def __rsub__(self, other):
        return Residue(self.ring, self._lift(other) - self.poly)

    def __neg__(self):
        return Residue(self.ring, -self.poly)

    def __mul__(self, other):
        if isinstance(other, (Residue, Poly)):
            return Residue(self.ring, (self.poly * self._lift(other)) % self.ring.modulus)
        return Residue(self.ring, self.poly * _q(other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = self.ring.one(), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def inverse(self) -> "Residue":
        return Residue(self.ring, invert_mod(self.poly, self.ring.modulus))

    def __truediv__(self, other):
        if isinstance(other, (Residue, Poly)):
            return self * Residue(self.ring, self._lift(other)).inverse()
        return Residue(self.ring, self.poly / _q(other))

    def __rtruediv__(self, other):
        return Residue(self.ring, self._lift(other)) * self.inverse()

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def is_rational(self) -> bool:
        return self.poly.degree <= 0

    def rational_value(self) -> mpq:
        if not self.is_rational():
            raise ValueError("residue is not a rational constant")
        return self.poly[0]

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.ring == other.ring and self.poly == other.poly
        return self.poly == Poly([other]) if not isinstance(other, Poly) else self.poly == other % self.ring.modulus

    def __hash__(self):
        return hash((self.ring, self.poly))

    def __repr__(self):
        return f"[{self.poly}]"


def squarefree_pieces(p: Poly) -> list[Poly]:
    """Distinct squarefree factors of ``p`` (each coprime to the others)."""
    return [f for f, _ in squarefree_split(p)]


__all__ = ["QuotientRing", "Residue", "DiscoveredFactor", "squarefree_pieces"]
