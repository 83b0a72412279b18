"""Exact rational matrices and fraction-free nullspace computation."""
from __future__ import annotations

import math
from functools import reduce
from typing import Iterable, Sequence

from gmpy2 import mpq, mpz

from .poly import _q


class RatMatrix:
    """Rectangular matrix of rationals (row-major, immutable by convention)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = [tuple(_q(x) for x in r) for r in rows]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix")
        self.rows = tuple(data)
        self.nrows = len(data)
        self.ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "RatMatrix":
        return cls([[0] * n for _ in range(m)], n)

    @property
    def shape(self):
        return self.nrows, self.ncols

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.rows == other.rows and self.ncols == other.ncols

    def __repr__(self):
        return f"RatMatrix({[[str(x) for x in r] for r in self.rows]})"

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return RatMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __mul__(self, other):
        if isinstance(other, RatMatrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = list(zip(*other.rows)) if other.nrows else [()] * other.ncols
            return RatMatrix(
                [[sum((a * b for a, b in zip(r, c)), mpq(0)) for c in cols] for r in self.rows],
                other.ncols,
            )
        s = _q(other)
        return RatMatrix([[a * s for a in r] for r in self.rows], self.ncols)

    __rmul__ = __mul__

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum((a * _q(x) for a, x in zip(r, v)), mpq(0)) for r in self.rows)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self.rows), self.nrows) if self.rows else RatMatrix([], 0)

    def rank(self) -> int:
        _, pivots = _bareiss_echelon(_integer_rows(self.rows), self.ncols)
        return len(pivots)


def _integer_rows(rows: Sequence[Sequence[mpq]]) -> list[list[mpz]]:
    """Scale each row to primitive integers (the nullspace is unchanged)."""
    out = []
    for r in rows:
        d = reduce(lambda x, y: x * y // math.gcd(x, y), (a.denominator for a in r), mpz(1))
        ints = [mpz(a * d) for a in r]
        g = reduce(math.gcd, ints, mpz(0))
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def _bareiss_echelon(a: list[list[mpz]], ncols: int) -> tuple[list[list[mpz]], list[int]]:
    """Fraction-free row echelon form (in place); pivot = smallest bit length."""
    m = len(a)
    prev = mpz(1)
    r = 0
    pivots: list[int] = []
    for c in range(ncols):
        if r == m:
            break
        best, best_bits = -1, None
        for i in range(r, m):
            x = a[i][c]
            if x != 0:
                bits = x.bit_length()
                if best_bits is None or bits < best_bits:
                    best, best_bits = i, bits
        if best < 0:
            continue
        a[r], a[best] = a[best], a[r]
        piv = a[r][c]
        prow = a[r]
        for i in range(r + 1, m):
            row = a[i]
            f = row[c]
            if f == 0:
                for j in range(c + 1, ncols):
                    if row[j] != 0:
                        row[j] = row[j] * piv // prev
            else:
                for j in range(c + 1, ncols):
                    row[j] = (piv * row[j] - f * prow[j]) // prev
                row[c] = mpz(0)
        prev = piv
        pivots.append(c)
        r += 1
    return a, pivots


def normalize_first_nonzero(v: Sequence[mpq]) -> tuple[mpq, ...]:
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return tuple(v)
    return tuple(x / lead for x in v)


def kernel_basis(m: RatMatrix | Sequence[Sequence]) -> list[tuple[mpq, ...]]:
    """Basis of the right nullspace, each vector scaled so its first nonzero entry is 1."""
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    n = m.ncols
    if n == 0:
        raise ValueError("kernel_basis of an empty matrix")
    a, pivots = _bareiss_echelon(_integer_rows(m.rows), n)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = []
    for f in free:
        x = [mpq(0)] * n
        x[f] = mpq(1)
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            row = a[r]
            s = mpq(0)
            for j in range(c + 1, n):
                if row[j] != 0 and x[j] != 0:
                    s += row[j] * x[j]
            x[c] = -s / row[c]
        basis.append(normalize_first_nonzero(x))
    return basis
