"""The w <-> s change of variable, the modular invariant, and Nickel singularities."""
from __future__ import annotations


from ..exactalg import (
    INFINITY,
    AlgebraicPoint,
    DiscoveredFactor,
    Poly,
    QuotientRing,
    kernel_basis,
)
from ..exactalg.poly import _q


def w_of_s(s):
    """``w = s / (2 (1 + s^2))``; exact for rationals, float in, float out."""
    if isinstance(s, float):
        return s / (2.0 * (1.0 + s * s))
    s = _q(s)
    return s / (2 * (1 + s * s))


_W = Poly.x()
MODULAR_NUM = (1 - 16 * _W**2 + 16 * _W**4) ** 3
MODULAR_DEN = 1728 * _W**8 * (1 - 16 * _W**2)


def modular_invariant(point):
    """``(1 - 16w^2 + 16w^4)^3 / (1728 w^8 (1 - 16 w^2))`` at an exact point.

    Returns a rational, or ``INFINITY`` at a pole.  At an ``AlgebraicPoint``
    the value is computed in the quotient ring and must come out scalar.
    """
    if point is INFINITY:
        return INFINITY
    if isinstance(point, AlgebraicPoint):
        ring = point.ring
        num = ring(MODULAR_NUM)
        den = ring(MODULAR_DEN)
        if den.is_zero():
            return INFINITY
        try:
            val = num / den
        except DiscoveredFactor as exc:
            raise ValueError(
                f"modular invariant is not uniform on {point}: denominator vanishes on factor {exc.factor}"
            ) from exc
        if not val.is_rational():
            raise ValueError(f"modular invariant is not a rational constant on {point}: residue {val}")
        return val.rational_value()
    w = _q(point)
    den = MODULAR_DEN(w)
    if den == 0:
        return INFINITY
    return MODULAR_NUM(w) / den


def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial, by exact division of ``x^n - 1``."""
    out = Poly.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            out = out.exact_div(cyclotomic(d))
    return out


def _minimal_polynomial(elem, degree_bound: int) -> Poly:
    powers = [elem.ring.one()]
    for _ in range(degree_bound):
        powers.append(powers[-1] * elem)
        dim = elem.ring.degree
        cols = [[p.poly[i] for p in powers] for i in range(dim)]
        ker = kernel_basis(cols)
        if ker:
            return Poly(ker[0]).primitive()
    raise ArithmeticError("minimal polynomial not found")


def nickel_singularities(n: int) -> list:
    """Finite w with ``1/w = u^k + u^-k + u^m + u^-m``, ``u^(2n+1) = 1``, ``(k, m) != (0, 0)``.

    Each location is returned once, as a rational or an ``AlgebraicPoint``
    carrying the minimal polynomial of its Galois orbit.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    order = 2 * n + 1
    ring = QuotientRing(cyclotomic(order))
    zeta = ring.gen
    inv = zeta ** (order - 1)
    found: list = []
    seen: set = set()
    for k in range(order):
        for m in range(k, order):
            if k == 0 and m == 0:
                continue
            u = zeta**k + inv**k + zeta**m + inv**m
            mp = _minimal_polynomial(u, ring.degree)
            if mp.degree == 1 and mp[0] == 0:
                continue  # 1/w = 0: no finite point
            wpoly = mp.reverse().factor_normal()
            if wpoly in seen:
                continue
            seen.add(wpoly)
            if wpoly.degree == 1:
                found.append(-wpoly[0] / wpoly[1])
            else:
                found.append(AlgebraicPoint(wpoly, f"Nickel locus n={n}"))
    return found
