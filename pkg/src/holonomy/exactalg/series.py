"""Truncated power series with exact rational coefficients."""
from __future__ import annotations

from typing import Iterable

from gmpy2 import mpq

from .poly import Poly, _q


class Series:
    """Power series known through ``w^order`` (coefficients ``c[0..order]``)."""

    __slots__ = ("c", "order")

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = [_q(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < -1:
            raise ValueError("order must be >= -1")
        c = c[: order + 1]
        c += [mpq(0)] * (order + 1 - len(c))
        self.c = tuple(c)
        self.order = order

    @classmethod
    def from_poly(cls, p: Poly, order: int) -> "Series":
        return cls(p.c, order)

    @classmethod
    def from_ratfunc(cls, num: Poly, den: Poly, order: int) -> "Series":
        return cls.from_poly(num, order) * cls.from_poly(den, order).inverse()

    def __len__(self):
        return self.order + 1

    def __getitem__(self, k):
        if isinstance(k, slice):
            return self.c[k]
        if k > self.order:
            raise IndexError(f"coefficient {k} beyond truncation order {self.order}")
        return self.c[k] if k >= 0 else mpq(0)

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other):
        return isinstance(other, Series) and self.order == other.order and self.c == other.c

    def __repr__(self):
        head = ", ".join(str(x) for x in self.c[:6])
        return f"Series([{head}{', ...' if self.order >= 6 else ''}], order={self.order})"

    def truncate(self, order: int) -> "Series":
        return Series(self.c, min(order, self.order))

    def valuation(self) -> int | None:
        for i, a in enumerate(self.c):
            if a != 0:
                return i
        return None

    def __neg__(self):
        return Series([-a for a in self.c], self.order)

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        if isinstance(other, Poly):
            return Series.from_poly(other, self.order)
        return Series([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return Series([self.c[i] + other.c[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (Series, Poly)):
            s = _q(other)
            return Series([a * s for a in self.c], self.order)
        other = self._coerce(other)
        n = min(self.order, other.order)
        a, b = self.c, other.c
        out = [mpq(0)] * (n + 1)
        for i in range(n + 1):
            x = a[i]
            if x == 0:
                continue
            for j in range(n + 1 - i):
                out[i + j] += x * b[j]
        return Series(out, n)

    __rmul__ = __mul__

    def inverse(self) -> "Series":
        if self.order < 0 or self.c[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        a = self.c
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, n + 1):
            s = mpq(0)
            for j in range(1, k + 1):
                s += a[j] * out[k - j]
            out.append(-s * inv0)
        return Series(out, n)

    def __truediv__(self, other):
        if isinstance(other, (Series, Poly)):
            return self * self._coerce(other).inverse()
        s = _q(other)
        return Series([a / s for a in self.c], self.order)

    def power(self, alpha) -> "Series":
        """``self^alpha`` for rational alpha; needs constant term 1."""
        if self.order < 0 or self.c[0] != 1:
            raise ValueError("power needs a series with constant term 1")
        alpha = _q(alpha)
        a = self.c
        g = [mpq(1)]
        for n in range(1, self.order + 1):
            acc = mpq(0)
            for k in range(1, n + 1):
                if a[k] != 0:
                    acc += ((alpha + 1) * k - n) * a[k] * g[n - k]
            g.append(acc / n)
        return Series(g, self.order)

    def derivative(self, k: int = 1) -> "Series":
        out = self
        for _ in range(k):
            c = out.c
            out = Series([i * c[i] for i in range(1, len(c))], out.order - 1)
        return out

    def shift_by(self, k: int) -> "Series":
        """Multiply by ``w^k`` (``k >= 0``)."""
        return Series([mpq(0)] * k + list(self.c), self.order + k)

    def to_poly(self) -> Poly:
        return Poly(self.c)

    def partial_sum(self, x):
        return Poly(self.c)(x)
