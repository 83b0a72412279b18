"""Rational functions in w: coprime numerator and monic denominator."""
from __future__ import annotations

from ..exactalg import Poly, gcd
from ..exactalg.poly import _q


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        if not isinstance(num, Poly):
            num = Poly([num])
        if den is None:
            den = Poly.const(1)
        elif not isinstance(den, Poly):
            den = Poly([den])
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly.const(1)
            elif den.degree > 0:
                g = gcd(num, den)
                if g.degree > 0:
                    num = num.exact_div(g)
                    den = den.exact_div(g)
            lc = den.lc
            if lc != 1:
                num = num / lc
                den = den / lc
        self.num = num
        self.den = den

    @classmethod
    def lift(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(x, _reduced=True) if isinstance(x, Poly) else cls(Poly([_q(x)]), _reduced=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc.lift(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        if self.is_polynomial():
            return f"RatFunc({self.num})"
        return f"RatFunc(({self.num}) / ({self.den}))"

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        o = RatFunc.lift(other)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        if o.is_polynomial():
            return RatFunc(self.num + o.num * self.den, self.den, _reduced=True)
        if self.is_polynomial():
            return RatFunc(o.num + self.num * o.den, o.den, _reduced=True)
        g = gcd(self.den, o.den)
        if g.degree <= 0:
            return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)
        b1 = self.den.exact_div(g)
        b2 = o.den.exact_div(g)
        return RatFunc(self.num * b2 + o.num * b1, self.den * b2)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-RatFunc.lift(other))

    def __rsub__(self, other):
        return RatFunc.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            s = _q(other)
            return RatFunc(self.num * s, self.den, _reduced=True) if s != 0 else RatFunc(Poly())
        o = RatFunc.lift(other)
        if self.is_polynomial() and o.is_polynomial():
            return RatFunc(self.num * o.num, _reduced=True)
        # cross-cancel before multiplying
        g1 = gcd(self.num, o.den) if o.den.degree > 0 else Poly.const(1)
        g2 = gcd(o.num, self.den) if self.den.degree > 0 else Poly.const(1)
        n1 = self.num.exact_div(g1) if g1.degree > 0 else self.num
        d2 = o.den.exact_div(g1) if g1.degree > 0 else o.den
        n2 = o.num.exact_div(g2) if g2.degree > 0 else o.num
        d1 = self.den.exact_div(g2) if g2.degree > 0 else self.den
        den = d1 * d2
        num = n1 * n2
        lc = den.lc
        return RatFunc(num / lc, den / lc, _reduced=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if not isinstance(other, (RatFunc, Poly)):
            return self * (1 / _q(other))
        return self * RatFunc.lift(other).inverse()

    def __rtruediv__(self, other):
        return RatFunc.lift(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.num**e, self.den**e, _reduced=True)

    def derivative(self, k: int = 1) -> "RatFunc":
        out = self
        for _ in range(k):
            if out.is_polynomial():
                out = RatFunc(out.num.derivative(), _reduced=True)
            else:
                out = RatFunc(out.num.derivative() * out.den - out.num * out.den.derivative(), out.den * out.den)
        return out

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def as_poly(self) -> Poly:
        if not self.is_polynomial():
            raise ValueError("not a polynomial")
        return self.num / self.den[0]


ZERO = RatFunc(Poly())
ONE = RatFunc(Poly.const(1))

__all__ = ["RatFunc", "ZERO", "ONE"]
