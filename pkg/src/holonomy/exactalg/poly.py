"""Dense univariate polynomials over the rationals."""
from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

Rational = mpq


class _NegInf:
    """Degree of the zero polynomial.  Compares below every integer."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("NEG_INF")

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("NEG_INF - NEG_INF is undefined")
        return self


NEG_INF = _NegInf()


class DiscoveredFactor(Exception):
    """Raised when an inversion modulo ``p`` hits a nontrivial factor of ``p``.

    Callers doing arithmetic at an algebraic point split the point along
    ``factor`` and its cofactor and redo the computation on each piece.
    """

    def __init__(self, factor: "Poly", modulus: "Poly"):
        super().__init__(f"nontrivial factor {factor} of {modulus}")
        self.factor = factor
        self.modulus = modulus

    @property
    def cofactor(self) -> "Poly":
        return self.modulus.exact_div(self.factor)


_MPQ = type(mpq(0))
_NUMBER = (int, _MPQ, type(mpz(0)))


def _q(c) -> mpq:
    return c if type(c) is _MPQ else mpq(c)


class Poly:
    """Immutable polynomial ``c[0] + c[1] w + ...`` with rational coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_q(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def _raw(cls, c: tuple) -> "Poly":
        p = object.__new__(cls)
        p.c = c
        return p

    @classmethod
    def const(cls, a) -> "Poly":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, k: int, a=1) -> "Poly":
        return cls([0] * k + [a])

    @classmethod
    def from_roots(cls, roots: Iterable) -> "Poly":
        out = cls.const(1)
        for r in roots:
            out = out * cls([-_q(r), 1])
        return out

    # -- basic properties -------------------------------------------------
    @property
    def degree(self):
        return len(self.c) - 1 if self.c else NEG_INF

    def is_zero(self) -> bool:
        return not self.c

    def is_constant(self) -> bool:
        return len(self.c) <= 1

    @property
    def lc(self) -> mpq:
        return self.c[-1] if self.c else mpq(0)

    def __getitem__(self, k: int) -> mpq:
        return self.c[k] if 0 <= k < len(self.c) else mpq(0)

    def __len__(self):
        return len(self.c)

    def __iter__(self):
        return iter(self.c)

    def valuation(self):
        for i, a in enumerate(self.c):
            if a != 0:
                return i
        return math.inf

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, _NUMBER):
            return self.c == Poly([other]).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.c:
            return "0"
        terms = []
        for k, a in enumerate(self.c):
            if a == 0:
                continue
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Poly._raw(tuple(-a for a in self.c))

    def __add__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, _NUMBER):
                return NotImplemented
            other = Poly([other])
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] = out[i] + x
        return Poly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, _NUMBER):
                return NotImplemented
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            if not isinstance(other, _NUMBER):
                return NotImplemented
            s = _q(other)
            if s == 0:
                return Poly._raw(())
            return Poly._raw(tuple(a * s for a in self.c))
        a, b = self.c, other.c
        if not a or not b:
            return Poly._raw(())
        out = [mpq(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        out, base = Poly.const(1), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __truediv__(self, s):
        s = _q(s)
        return Poly._raw(tuple(a / s for a in self.c))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        db = len(other.c) - 1
        if len(r) - 1 < db:
            return Poly._raw(()), self
        inv = 1 / other.c[-1]
        q = [mpq(0)] * (len(r) - db)
        b = other.c
        for k in range(len(r) - 1 - db, -1, -1):
            f = r[k + db] * inv
            q[k] = f
            if f != 0:
                for j in range(db + 1):
                    r[k + j] -= f * b[j]
        return Poly(q), Poly(r[:db])

    def __divmod__(self, other):
        return self.divmod(other)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    # -- calculus and substitutions ----------------------------------------
    def derivative(self, k: int = 1) -> "Poly":
        c = self.c
        for _ in range(k):
            c = tuple(i * c[i] for i in range(1, len(c)))
        return Poly(c)

    def __call__(self, x):
        acc = x * 0
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def taylor_shift(self, a) -> "Poly":
        """Coefficients of ``p(w + a)``."""
        a = _q(a)
        c = list(self.c)
        n = len(c)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Poly(c)

    def scale_arg(self, s) -> "Poly":
        """Coefficients of ``p(s w)``."""
        s = _q(s)
        return Poly(a * s ** k for k, a in enumerate(self.c))

    def reverse(self, d: int | None = None) -> "Poly":
        """``w^d p(1/w)`` with ``d`` defaulting to the degree."""
        if d is None:
            d = len(self.c) - 1
        if d < len(self.c) - 1:
            raise ValueError("reversal degree below polynomial degree")
        c = list(self.c) + [mpq(0)] * (d + 1 - len(self.c))
        return Poly(reversed(c))

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly._raw(())
        for a in reversed(self.c):
            acc = acc * other + a
        return acc

    # -- normalisation ----------------------------------------------------
    def denominator_lcm(self) -> mpz:
        return reduce(lambda x, y: x * y // math.gcd(x, y), (a.denominator for a in self.c), mpz(1))

    def integer_coeffs(self) -> list[mpz]:
        """Primitive integer coefficient list (sign of leading coefficient kept)."""
        if not self.c:
            return []
        d = self.denominator_lcm()
        ints = [mpz(a * d) for a in self.c]
        g = reduce(math.gcd, ints)
        return [x // g for x in ints]

    def primitive(self) -> "Poly":
        """Integer coefficients with gcd 1 and positive leading coefficient."""
        ints = self.integer_coeffs()
        if ints and ints[-1] < 0:
            ints = [-x for x in ints]
        return Poly(ints)

    def factor_normal(self) -> "Poly":
        """Primitive integer form whose lowest nonzero coefficient is positive.

        This is the display convention for factors (``1 - 4w`` rather than
        ``4w - 1``).
        """
        ints = self.integer_coeffs()
        low = next((x for x in ints if x != 0), 1)
        if low < 0:
            ints = [-x for x in ints]
        return Poly(ints)

    def content(self) -> mpq:
        """Rational ``c`` with ``self == c * self.primitive()``."""
        if not self.c:
            return mpq(0)
        prim = self.primitive()
        return self.c[-1] / prim.c[-1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self / self.c[-1]

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self.c)


# -- gcd machinery ----------------------------------------------------------
def _int_prem(a: list, b: list) -> list:
    """Pseudo-remainder of integer coefficient lists (lowest degree first)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        k = len(r) - 1 - db
        f = r[-1]
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[k + j] -= f * b[j]
        while r and r[-1] == 0:
            r.pop()
    return r


def _int_primitive(a: list) -> list:
    if not a:
        return a
    g = reduce(math.gcd, a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def gcd(a: Poly, b: Poly) -> Poly:
    """Greatest common divisor, returned in primitive form (zero if both zero)."""
    if a.is_zero():
        return b.primitive()
    if b.is_zero():
        return a.primitive()
    x = _int_primitive(a.integer_coeffs())
    y = _int_primitive(b.integer_coeffs())
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _int_prem(x, y)
        x, y = y, _int_primitive(r)
    return Poly(_int_primitive(x))


def gcd_many(polys: Iterable[Poly]) -> Poly:
    out = Poly()
    for p in sorted(polys, key=lambda q: len(q.c)):
        out = gcd(out, p)
        if out.degree == 0:
            break
    return out


def lcm(a: Poly, b: Poly) -> Poly:
    return (a * b).exact_div(gcd(a, b)).primitive()


def xgcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """Monic ``g`` and ``s, t`` with ``s a + t b = g``."""
    r0, r1 = a, b
    s0, s1 = Poly.const(1), Poly()
    t0, t1 = Poly(), Poly.const(1)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc
    return r0 / lc, s0 / lc, t0 / lc


def invert_mod(a: Poly, p: Poly) -> Poly:
    """Inverse of ``a`` modulo ``p``.

    Raises ``ZeroDivisionError`` when ``a = 0 mod p`` and
    ``DiscoveredFactor`` when ``gcd(a, p)`` is a proper factor of ``p``.
    """
    a = a % p
    if a.is_zero():
        raise ZeroDivisionError("residue is zero modulo the minimal polynomial")
    g, s, _ = xgcd(a, p)
    if g.degree > 0:
        raise DiscoveredFactor(g.primitive(), p)
    return s % p


# -- factor-level operations ------------------------------------------------
def squarefree_split(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with pairwise coprime squarefree ``f_i``."""
    if p.is_zero():
        raise ValueError("squarefree_split of the zero polynomial")
    out = []
    f = p.primitive()
    if f.degree == 0:
        return out
    df = f.derivative()
    a = gcd(f, df)
    b = f.exact_div(a)
    c = df.exact_div(a)
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        g = gcd(b, d)
        if g.degree > 0:
            out.append((g.factor_normal(), i))
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    out = Poly.const(1)
    for f, _ in squarefree_split(p):
        out = out * f
    return out


def _divisors(n: int) -> list[int]:
    n = abs(int(n))
    small = []
    large = []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i * i != n:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _factor_int(n: int) -> dict[int, int]:
    import gmpy2

    n = abs(int(n))
    out: dict[int, int] = {}
    for q in (2, 3, 5, 7, 11, 13):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    f = 17
    while n > 1 and f * f <= n:
        if gmpy2.is_prime(n):
            break
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors_from_factorization(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for q, e in fac.items():
        divs = [d * q ** k for d in divs for k in range(e + 1)]
    return sorted(divs)


def rational_roots(p: Poly) -> list[tuple[mpq, int]]:
    """All rational roots of ``p`` with multiplicities, sorted by value."""
    if p.is_zero():
        raise ValueError("rational_roots of the zero polynomial")
    out = []
    for f, mult in squarefree_split(p):
        for r in _sqf_rational_roots(f):
            out.append((r, mult))
    return sorted(out)


def _sqf_rational_roots(f: Poly) -> list[mpq]:
    roots = []
    ints = f.integer_coeffs()
    v = next(i for i, x in enumerate(ints) if x != 0)
    if v > 0:
        roots.append(mpq(0))
        ints = ints[v:]
    if len(ints) <= 1:
        return roots
    a0, an = ints[0], ints[-1]
    nums = _divisors_from_factorization(_factor_int(a0))
    dens = _divisors_from_factorization(_factor_int(an))
    fl = [float(x) for x in ints]
    for b in dens:
        for a in nums:
            if math.gcd(a, b) != 1:
                continue
            for s in (1, -1):
                r = s * a / b
                if not _float_near_root(fl, r):
                    continue
                num, den = mpz(s * a), mpz(b)
                # exact test: den^n p(num/den) == 0 by homogeneous Horner
                acc = mpz(0)
                pw = mpz(1)
                for c in reversed(ints):
                    acc = acc * num + c * pw
                    pw *= den
                if acc == 0:
                    roots.append(mpq(num, den))
    return roots


def _float_near_root(fl: Sequence[float], r: float) -> bool:
    val = 0.0
    mag = 0.0
    ar = abs(r)
    for c in reversed(fl):
        val = val * r + c
        mag = mag * ar + abs(c)
    if not math.isfinite(mag) or mag == 0.0:
        return True
    return abs(val) <= 1e-6 * mag


def resultant(f: Poly, g: Poly) -> mpq:
    """Resultant of ``f`` and ``g`` by the Euclidean recurrence."""
    if f.is_zero() or g.is_zero():
        return mpq(0)
    acc = mpq(1)
    while True:
        m, n = f.degree, g.degree
        if n == 0:
            return acc * g.lc**m
        r = f % g
        if r.is_zero():
            return mpq(0)
        if (m * n) % 2:
            acc = -acc
        acc *= g.lc ** (m - r.degree)
        f, g = g, r


def interpolate(xs: Sequence, ys: Sequence) -> Poly:
    """Lagrange interpolation through the points ``(xs[i], ys[i])``."""
    out = Poly()
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = Poly.const(1)
        denom = mpq(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = basis * Poly([-_q(xj), 1])
                denom *= _q(xi) - _q(xj)
        out = out + basis * (_q(yi) / denom)
    return out
