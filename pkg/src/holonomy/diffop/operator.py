"""Linear differential operators ``sum_k a_k(w) d^k`` (d = d/dw).

Coefficients are either all ``Poly`` (the public, cleared form) or all
``RatFunc`` (what division over the rational-function field produces).
``*`` between operators is composition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from ..exactalg import Poly, Series, gcd, gcd_many
from .ratfunc import RatFunc


def _is_zero(c) -> bool:
    return c.is_zero()


class DiffOp:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable):
        cs = list(coeffs)
        rational = any(isinstance(c, RatFunc) for c in cs)
        if rational:
            cs = [RatFunc.lift(c if isinstance(c, (RatFunc, Poly)) else Poly([c])) for c in cs]
        else:
            cs = [c if isinstance(c, Poly) else Poly([c]) for c in cs]
        while cs and _is_zero(cs[-1]):
            cs.pop()
        self.coeffs = tuple(cs)

    # -- construction -----------------------------------------------------
    @classmethod
    def d(cls, k: int = 1) -> "DiffOp":
        return cls([Poly()] * k + [Poly.const(1)])

    @classmethod
    def mult(cls, f) -> "DiffOp":
        """Multiplication by the function ``f`` (order 0)."""
        return cls([f])

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls([])

    # -- properties -------------------------------------------------------
    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self):
        return self.coeffs[-1]

    def is_polynomial(self) -> bool:
        return all(isinstance(c, Poly) or c.is_polynomial() for c in self.coeffs)

    def __getitem__(self, k: int):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Poly() if not self.coeffs or isinstance(self.coeffs[0], Poly) else RatFunc(Poly())

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(RatFunc.lift(a) == RatFunc.lift(b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(RatFunc.lift(c) for c in self.coeffs))

    def __repr__(self):
        return f"DiffOp({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            dk = "" if k == 0 else ("d" if k == 1 else f"d^{k}")
            parts.append(f"({c})" + (f"*{dk}" if dk else ""))
        return " + ".join(parts)

    # -- ring structure ---------------------------------------------------
    def _rational(self) -> "DiffOp":
        return DiffOp([RatFunc.lift(c) for c in self.coeffs] or [RatFunc(Poly())])

    def __add__(self, other: "DiffOp") -> "DiffOp":
        if not isinstance(other, DiffOp):
            other = DiffOp.mult(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if isinstance(self.coeffs[0], Poly) and isinstance(other.coeffs[0], Poly):
            a, b = self, other
        else:
            a, b = self._rational(), other._rational()
        n = max(len(a.coeffs), len(b.coeffs))
        return DiffOp([a[k] + b[k] for k in range(n)])

    def __neg__(self):
        return DiffOp([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, DiffOp):
            other = DiffOp.mult(other)
        return self + (-other)

    def __mul__(self, other):
        """Composition ``self o other`` by the Leibniz rule ``d f = f d + f'``."""
        if not isinstance(other, DiffOp):
            other = DiffOp.mult(other if isinstance(other, (Poly, RatFunc)) else Poly([other]))
        if self.is_zero() or other.is_zero():
            return DiffOp.zero()
        qa = self.order
        out: list = [None] * (qa + other.order + 1)
        # derivatives of each coefficient of other, up to order qa
        ders = []
        for b in other.coeffs:
            row = [b]
            for _ in range(qa):
                row.append(row[-1].derivative())
            ders.append(row)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for l in range(i + 1):
                binom = math.comb(i, l)
                for j, row in enumerate(ders):
                    bl = row[l]
                    if bl.is_zero():
                        continue
                    term = a * bl * binom if binom != 1 else a * bl
                    k = i - l + j
                    out[k] = term if out[k] is None else out[k] + term
        zero = Poly() if isinstance(self.coeffs[0], Poly) and isinstance(other.coeffs[0], Poly) else RatFunc(Poly())
        return DiffOp([zero if c is None else c for c in out])

    def __rmul__(self, other):
        return DiffOp.mult(other if isinstance(other, (Poly, RatFunc)) else Poly([other])) * self

    def __pow__(self, e: int):
        out = DiffOp([Poly.const(1)])
        for _ in range(e):
            out = out * self
        return out

    # -- actions ----------------------------------------------------------
    def apply(self, f: Series) -> Series:
        """``sum a_k f^(k)``, known through order ``trunc(f) - q``."""
        if not self.is_polynomial():
            raise ValueError("apply needs polynomial coefficients; clear the operator first")
        q = self.order
        if f.order < q:
            raise ValueError("series truncation below operator order")
        top = f.order - q
        acc = Series([0] * (top + 1), top)
        der = f
        for k, a in enumerate(self.coeffs):
            if k:
                der = der.derivative()
            if a.is_zero():
                continue
            poly = a if isinstance(a, Poly) else a.as_poly()
            acc = acc + (der.truncate(top) * poly)
        return acc

    def apply_poly(self, f: Poly) -> Poly:
        if not self.is_polynomial():
            raise ValueError("apply_poly needs polynomial coefficients")
        acc = Poly()
        der = f
        for k, a in enumerate(self.coeffs):
            if k:
                der = der.derivative()
            if not a.is_zero():
                acc = acc + a * der
        return acc

    def apply_ratfunc(self, f: RatFunc) -> RatFunc:
        acc = RatFunc(Poly())
        der = RatFunc.lift(f)
        for k, a in enumerate(self.coeffs):
            if k:
                der = der.derivative()
            if not a.is_zero():
                acc = acc + RatFunc.lift(a) * der
        return acc

    def adjoint(self) -> "DiffOp":
        """``sum (-d)^k o a_k``."""
        out = DiffOp.zero()
        for k, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            term = DiffOp.d(k) * DiffOp.mult(a)
            out = out + (term if k % 2 == 0 else -term)
        return out

    # -- normal forms -----------------------------------------------------
    def cleared(self) -> tuple[RatFunc, "DiffOp"]:
        """``(c, P)`` with ``self = c * P``, P polynomial and primitive.

        ``c`` is a rational function multiplying on the left.
        """
        if self.is_zero():
            return RatFunc(Poly.const(1)), self
        rs = [RatFunc.lift(c) for c in self.coeffs]
        den = reduce(lambda x, y: (x * y).exact_div(gcd(x, y)) if y.degree > 0 else x, (r.den for r in rs), Poly.const(1))
        polys = [r.num * den.exact_div(r.den) for r in rs]
        g = gcd_many([p for p in polys if not p.is_zero()])
        polys = [p.exact_div(g) for p in polys]
        prim, content = _rational_primitive(polys)
        return RatFunc(g * content, den), DiffOp(prim)

    def primitive(self) -> "DiffOp":
        """Polynomial coefficients with no common factor, integer content 1,
        and a positive leading term in the leading coefficient."""
        return self.cleared()[1]

    def monic(self) -> "DiffOp":
        lead = RatFunc.lift(self.leading)
        return DiffOp([RatFunc.lift(c) / lead for c in self.coeffs])

    def same_up_to_content(self, other: "DiffOp") -> bool:
        """Equal after left-multiplication by a nonzero rational function."""
        if self.order != other.order:
            return False
        la, lb = RatFunc.lift(self.leading), RatFunc.lift(other.leading)
        return all(RatFunc.lift(a) * lb == RatFunc.lift(b) * la for a, b in zip(self.coeffs, other.coeffs))

    def translate(self, a) -> "DiffOp":
        """The operator in ``z = w - a``: coefficients ``a_k(z + a)``."""
        if not self.is_polynomial():
            raise ValueError("translate needs polynomial coefficients")
        return DiffOp([RatFunc.lift(c).as_poly().taylor_shift(a) for c in self.coeffs])

    def degrees(self) -> list:
        return [RatFunc.lift(c).num.degree for c in self.coeffs]


def _rational_primitive(polys: Sequence[Poly]) -> tuple[list[Poly], mpq]:
    dens = [a.denominator for p in polys for a in p.c]
    d = reduce(lambda x, y: x * y // math.gcd(x, y), dens, mpz(1))
    ints = [[mpz(a * d) for a in p.c] for p in polys]
    g = reduce(math.gcd, (x for row in ints for x in row), mpz(0))
    if g == 0:
        return list(polys), mpq(1)
    lead = polys[-1].lc
    sign = -1 if lead < 0 else 1
    scale = mpq(sign * d, g)
    return [p * scale for p in polys], 1 / scale


# -- division -------------------------------------------------------------
@dataclass(frozen=True)
class Division:
    """Result of an Ore division over the rational-function field.

    For a right division ``A = quotient * B + remainder``; for a left
    division ``A = B * quotient + remainder``.  Both are exact identities.
    """

    quotient: DiffOp
    remainder: DiffOp

    def __iter__(self):
        return iter((self.quotient, self.remainder))


def right_divide(A: DiffOp, B: DiffOp) -> Division:
    if B.is_zero():
        raise ZeroDivisionError("division by the zero operator")
    n = B.order
    lead = RatFunc.lift(B.leading)
    R = A._rational() if not A.is_zero() else A
    Q: list = []
    while not R.is_zero() and R.order >= n:
        j = R.order - n
        c = RatFunc.lift(R.leading) / lead
        term = DiffOp([RatFunc(Poly())] * j + [c])
        Q.append((j, c))
        R = R - term * B
    qc = [RatFunc(Poly())] * ((max(j for j, _ in Q) + 1) if Q else 0)
    for j, c in Q:
        qc[j] = qc[j] + c
    return Division(DiffOp(qc), R)


def left_divide(A: DiffOp, B: DiffOp) -> Division:
    if B.is_zero():
        raise ZeroDivisionError("division by the zero operator")
    n = B.order
    lead = RatFunc.lift(B.leading)
    R = A._rational() if not A.is_zero() else A
    Q: list = []
    while not R.is_zero() and R.order >= n:
        j = R.order - n
        c = RatFunc.lift(R.leading) / lead
        term = DiffOp([RatFunc(Poly())] * j + [c])
        Q.append((j, c))
        R = R - B * term
    qc = [RatFunc(Poly())] * ((max(j for j, _ in Q) + 1) if Q else 0)
    for j, c in Q:
        qc[j] = qc[j] + c
    return Division(DiffOp(qc), R)


def mul(A: DiffOp, B: DiffOp) -> DiffOp:
    return A * B


def adjoint(L: DiffOp) -> DiffOp:
    return L.adjoint()


def apply(L: DiffOp, f: Series) -> Series:
    return L.apply(f)


def first_order_from_solution(logderiv) -> DiffOp:
    """Cleared form of ``d - u`` where u is the logarithmic derivative."""
    u = RatFunc.lift(logderiv)
    return DiffOp([-u.num, u.den]).primitive()


def projection_constant(Q: DiffOp, f: Series, g: Series):
    """The constant alpha with ``Q(f - alpha g) = 0`` through the common truncation, or None."""
    if not Q.is_polynomial():
        Q = Q.primitive()
    n = min(f.order, g.order)
    rf, rg = Q.apply(f.truncate(n)), Q.apply(g.truncate(n))
    alpha = None
    for a, b in zip(rf, rg):
        if b != 0:
            alpha = a / b
            break
    if alpha is None:
        return mpq(0) if all(a == 0 for a in rf) else None
    if all(a == alpha * b for a, b in zip(rf, rg)):
        return alpha
    return None
