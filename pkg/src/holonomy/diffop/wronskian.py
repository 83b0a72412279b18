"""Abel's identity and closed forms of hyperexponential functions."""
from __future__ import annotations

from typing import Iterable

from gmpy2 import mpq

from ..exactalg import Poly, Series, gcd, interpolate, rational_roots, resultant
from .operator import DiffOp
from .ratfunc import RatFunc


def wronskian_logderiv(L: DiffOp) -> RatFunc:
    """``W'/W = -a_{q-1}/a_q``."""
    if L.order < 1:
        raise ValueError("Wronskian needs order >= 1")
    return -RatFunc.lift(L[L.order - 1]) / RatFunc.lift(L.leading)


def logderiv_of_product(factors: Iterable[tuple[Poly, mpq]]) -> RatFunc:
    """``sum e f'/f`` for the product ``prod f^e``."""
    acc = RatFunc(Poly())
    for f, e in factors:
        acc = acc + RatFunc(f.derivative() * e, f)
    return acc


def hyperexponential_closed_form(
    logderiv, hints: Iterable[Poly] = ()
) -> list[tuple[Poly, mpq]] | None:
    """Write ``exp(int u)`` as ``prod f_i^{e_i}`` (up to a constant), or return None.

    Succeeds iff u has only simple poles with rational residues and no
    polynomial part.  Residues and the factors carrying them come from the
    Rothstein-Trager resultant ``res_w(D, N - z D')``.  Factors are split
    further at rational roots and along ``hints`` (e.g. known singular
    factors); each factor is primitive with a positive lowest coefficient.
    """
    u = RatFunc.lift(logderiv)
    if u.is_zero():
        return []
    num, den = u.num, u.den
    if num.degree >= den.degree:
        return None
    dden = den.derivative()
    if gcd(den, dden).degree > 0:
        return None
    n = den.degree
    zs = list(range(n + 1))
    vals = [resultant(den, num - dden * z) for z in zs]
    res_poly = interpolate(zs, vals)
    roots = rational_roots(res_poly)
    if sum(m for _, m in roots) != n:
        return None
    pieces: list[tuple[Poly, mpq]] = []
    for c, _ in roots:
        g = gcd(den, num - dden * c)
        for f in _split(g, hints):
            pieces.append((f, c))
    pieces.sort(key=lambda fe: (fe[0].degree, tuple(fe[0].c)))
    if logderiv_of_product(pieces) != u:
        return None
    return pieces


def _split(g: Poly, hints: Iterable[Poly]) -> list[Poly]:
    out = []
    rest = g
    for r, _ in rational_roots(g):
        lin = Poly([-r, 1]).factor_normal()
        out.append(lin)
        rest = rest.exact_div(lin)
    todo = [rest] if rest.degree > 0 else []
    for h in hints:
        nxt = []
        for piece in todo:
            c = gcd(piece, h)
            if 0 < c.degree < piece.degree:
                nxt.extend([c, piece.exact_div(c)])
            else:
                nxt.append(piece)
        todo = nxt
    out.extend(p.factor_normal() for p in todo)
    return out


def hyperexponential_series(factors: Iterable[tuple[Poly, mpq]], order: int) -> Series:
    """Power series of ``prod f^e`` through ``w^order``, scaled to lowest coefficient 1.

    A factor vanishing at 0 must be ``w`` itself with an integer exponent.
    """
    shift = 0
    acc = Series([1], order)
    for f, e in factors:
        if f[0] == 0:
            if f.degree != 1 or mpq(e).denominator != 1:
                raise ValueError("only integer powers of w may vanish at the origin")
            shift += int(e)
            continue
        acc = acc * Series.from_poly(f / f[0], order).power(e)
    if shift < 0:
        raise ValueError("negative power of w: not a power series")
    return acc.shift_by(shift).truncate(order)
