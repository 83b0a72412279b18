"""Power series in w whose coefficients are finite Fourier sums in one or two angles.

A harmonic ``k`` stands for ``exp(i k phi)``; with ``t = exp(i phi)`` we have
``2 cos(phi) = t + 1/t``.  The third angle of the chi3 integrand is tied to
the other two by ``phi3 = -phi1 - phi2``, so its harmonic ``k`` becomes the
pair ``(-k, -k)``.

This is the reference (literal) route to the chi3 coefficients.  It is
simple and obviously correct but grows like N^6, so it is only used for
small orders and to cross-check the production grid route.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable

from gmpy2 import mpq

from ..exactalg import Series

Harmonic = tuple[int, ...]


class AngularSeries:
    """``sum_n w^n sum_k c[n][k] exp(i k.phi)`` truncated after ``w^max_order``."""

    __slots__ = ("data", "max_order", "nangles")

    def __init__(self, data: dict[int, dict[Harmonic, object]], max_order: int, nangles: int):
        self.max_order = max_order
        self.nangles = nangles
        clean = {}
        for n, row in data.items():
            if n > max_order:
                continue
            r = {k: v for k, v in row.items() if v != 0}
            if r:
                clean[n] = r
        self.data = clean

    @classmethod
    def constant(cls, value, max_order: int, nangles: int) -> "AngularSeries":
        return cls({0: {(0,) * nangles: value}}, max_order, nangles)

    @classmethod
    def harmonic(cls, terms: dict[Harmonic, object], max_order: int) -> "AngularSeries":
        nangles = len(next(iter(terms)))
        return cls({0: dict(terms)}, max_order, nangles)

    def coefficient(self, n: int) -> dict[Harmonic, object]:
        if n > self.max_order:
            raise IndexError(f"order {n} beyond truncation {self.max_order}")
        return dict(self.data.get(n, {}))

    def valuation(self) -> int | None:
        return min(self.data) if self.data else None

    def harmonic_bound(self, n: int) -> int:
        row = self.data.get(n, {})
        return max((max(abs(x) for x in k) for k in row), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, AngularSeries)
            and self.max_order == other.max_order
            and self.nangles == other.nangles
            and self.data == other.data
        )

    def __repr__(self):
        return f"AngularSeries(order={self.max_order}, angles={self.nangles}, terms={sum(map(len, self.data.values()))})"

    def _coerce(self, other) -> "AngularSeries":
        if isinstance(other, AngularSeries):
            if other.nangles != self.nangles:
                raise ValueError("angle count mismatch")
            return other
        return AngularSeries.constant(other, self.max_order, self.nangles)

    def __add__(self, other):
        other = self._coerce(other)
        top = min(self.max_order, other.max_order)
        out: dict[int, dict] = {}
        for src in (self.data, other.data):
            for n, row in src.items():
                if n > top:
                    continue
                dst = out.setdefault(n, defaultdict(int))
                for k, v in row.items():
                    dst[k] += v
        return AngularSeries(out, top, self.nangles)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "AngularSeries":
        return AngularSeries({n: {k: v * c for k, v in row.items()} for n, row in self.data.items()}, self.max_order, self.nangles)

    def __mul__(self, other):
        if not isinstance(other, AngularSeries):
            return self.scale(other)
        other = self._coerce(other)
        top = min(self.max_order, other.max_order)
        out: dict[int, dict] = {}
        for n1, r1 in self.data.items():
            for n2, r2 in other.data.items():
                n = n1 + n2
                if n > top:
                    continue
                dst = out.setdefault(n, defaultdict(int))
                for k1, v1 in r1.items():
                    for k2, v2 in r2.items():
                        dst[tuple(a + b for a, b in zip(k1, k2))] += v1 * v2
        return AngularSeries(out, top, self.nangles)

    __rmul__ = __mul__

    def shift(self, m: int) -> "AngularSeries":
        """Multiply by ``w^m``."""
        return AngularSeries({n + m: dict(r) for n, r in self.data.items()}, self.max_order, self.nangles)

    def truncate(self, order: int) -> "AngularSeries":
        return AngularSeries(self.data, min(order, self.max_order), self.nangles)

    def geometric_tail(self) -> "AngularSeries":
        """``sum_{m>=1} self^m``; requires positive valuation.

        The number of terms is ``floor(max_order / valuation)``.
        """
        v = self.valuation()
        if v is None:
            return AngularSeries({}, self.max_order, self.nangles)
        if v < 1:
            raise ValueError("geometric tail needs a positive valuation")
        total = self
        power = self
        for _ in range(self.max_order // v - 1):
            power = power * self
            total = total + power
        return total

    def map_harmonics(self, f: Callable[[Harmonic], Harmonic], nangles: int) -> "AngularSeries":
        out: dict[int, dict] = {}
        for n, row in self.data.items():
            dst = out.setdefault(n, defaultdict(int))
            for k, v in row.items():
                dst[f(k)] += v
        return AngularSeries(out, self.max_order, nangles)

    def constant_term(self) -> Series:
        """Angular average: the all-zero harmonic at every order."""
        zero = (0,) * self.nangles
        return Series([self.data.get(n, {}).get(zero, 0) for n in range(self.max_order + 1)], self.max_order)


# -- single-angle building blocks -------------------------------------------
def _two_cos(order: int) -> AngularSeries:
    return AngularSeries.harmonic({(1,): 1, (-1,): 1}, order)


def expand_x_tilde(N: int) -> AngularSeries:
    """Expansion of x through ``w^N`` from ``x = w (1 + 2 cos(phi) x + x^2)``.

    This is the small root of ``x + 1/x = 1/w - 2 cos(phi)``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    coeffs: list[dict[Harmonic, int]] = [{} for _ in range(N + 1)]
    coeffs[1] = {(0,): 1}
    for n in range(2, N + 1):
        acc: dict[Harmonic, int] = defaultdict(int)
        for (k,), v in coeffs[n - 1].items():
            acc[(k + 1,)] += v
            acc[(k - 1,)] += v
        for i in range(1, n - 1):
            j = n - 1 - i
            for (k1,), v1 in coeffs[i].items():
                for (k2,), v2 in coeffs[j].items():
                    acc[(k1 + k2,)] += v1 * v2
        coeffs[n] = {k: v for k, v in acc.items() if v}
    return AngularSeries(dict(enumerate(coeffs)), N, 1)


def expand_y_tilde(N: int) -> AngularSeries:
    """Expansion of ``y = 1/sqrt((1/(2w) - cos phi)^2 - 1)`` through ``w^N``.

    Uses ``y = 2 x / (1 - x^2)`` with x from ``expand_x_tilde``.
    """
    x = expand_x_tilde(N)
    x2 = x * x
    return (x * 2) * (1 + x2.geometric_tail())


def x_identity_residual(x: AngularSeries) -> AngularSeries:
    """``w x^2 - (1 - 2 w cos phi) x + w``; zero iff x solves its defining quadratic."""
    w = AngularSeries.constant(1, x.max_order, 1).shift(1)
    return (x * x).shift(1) - x + (_two_cos(x.max_order) * x).shift(1) + w


def y_identity_residual(y: AngularSeries) -> AngularSeries:
    """``y^2 ((1 - 2 w cos phi)^2 - 4 w^2) - 4 w^2``.

    This is ``4 w^2 [y^2 ((1/(2w) - cos phi)^2 - 1) - 1]``, so it vanishes
    through the truncation order iff the defining identity of y holds.
    """
    top = y.max_order
    one = AngularSeries.constant(1, top, 1)
    a = one - _two_cos(top).shift(1)
    four_w2 = AngularSeries.constant(4, top, 1).shift(2)
    return (y * y) * (a * a - four_w2) - four_w2


# -- the literal chi3 pipeline ------------------------------------------------
_EMBED = {
    0: lambda k: (k[0], 0),
    1: lambda k: (0, k[0]),
    2: lambda k: (-k[0], -k[0]),
}


def _embed(s: AngularSeries, angle: int) -> AngularSeries:
    return s.map_harmonics(_EMBED[angle], 2)


def _sine_diff_times_2i(i: int, j: int, order: int) -> AngularSeries:
    """``2 i (sin phi_i - sin phi_j) = (t_i - 1/t_i) - (t_j - 1/t_j)`` in two-angle harmonics."""
    terms: dict[Harmonic, int] = defaultdict(int)
    for a, sign in ((i, 1), (j, -1)):
        for k, c in (((1,), 1), ((-1,), -1)):
            terms[_EMBED[a](k)] += sign * c
    return AngularSeries.harmonic({k: v for k, v in terms.items() if v}, order)


def chi3_angular(N: int) -> Series:
    """chi3/8 through ``w^N`` by direct AngularSeries multiplication (reference route)."""
    if N < 9:
        raise ValueError("chi3 expansions need N >= 9")
    x1 = expand_x_tilde(N)
    y1 = expand_y_tilde(N)
    xs = [_embed(x1, a) for a in range(3)]
    ys = [_embed(y1, a) for a in range(3)]
    g23 = (xs[1] * xs[2]).geometric_tail()
    g31 = (xs[2] * xs[0]).geometric_tail()
    prod_x = xs[0] * xs[1] * xs[2]
    ratio = 1 + prod_x.geometric_tail() * 2
    # with f_ij = D_ij g_ij / (2i): H = f23 (f31 + f23/2) = -(1/8) D23 g23 (2 D31 g31 + D23 g23)
    a = _sine_diff_times_2i(1, 2, N) * g23
    b = _sine_diff_times_2i(2, 0, N) * g31 * 2 + a
    h_scaled = a * b
    integrand = ys[0] * ys[1] * ys[2] * ratio * h_scaled
    ct = integrand.constant_term()
    # chi3 = CT(Y E H) = -CT(Y E H')/8 and we return chi3/8
    return Series([mpq(-c, 64) for c in ct], N)
