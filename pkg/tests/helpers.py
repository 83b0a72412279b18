"""Operators and series shared by the test modules."""
from gmpy2 import mpq

from holonomy.diffop import DiffOp, RatFunc, first_order_from_solution
from holonomy.exactalg import Poly, Series

w = Poly.x()

# Picard-Fuchs operator of the complete elliptic integral in s
PF = DiffOp([Poly([-4, 31]), 144 * w * (w - 1) ** 2, 144 * w * w * (w - 1) ** 2])

# first-order factors of the chi3 operator
L1 = DiffOp([Poly.const(-1), w * (1 - 4 * w)])
N1 = first_order_from_solution(RatFunc(2 * (1 + 2 * w), w * (1 - 16 * w * w)))


def s2_series(N: int) -> Series:
    """w^2 (1-4w)^(-3/2) (1+4w)^(-1/2) through w^N."""
    base = Series.from_poly(1 - 4 * w, N).power(mpq(-3, 2)) * Series.from_poly(1 + 4 * w, N).power(mpq(-1, 2))
    return base.shift_by(2).truncate(N)


def pf_series_at(s0: int, N: int) -> Series:
    """Analytic solution of PF at s = s0 with y(s0)=1, y'(s0)=0, in powers of s - s0."""
    T = PF.translate(s0)
    a = T.coeffs
    y = [mpq(1), mpq(0)]
    for n in range(N - 1):
        acc = mpq(0)
        for k, ak in enumerate(a):
            for j, c in enumerate(ak.c):
                m = n - j
                if m < 0 or (j == 0 and k == 2):
                    continue
                idx = m + k
                if idx < len(y):
                    f = 1
                    for i in range(1, k + 1):
                        f *= m + i
                    acc += c * f * y[idx]
        y.append(-acc / (a[2][0] * (n + 1) * (n + 2)))
    return Series(y[: N + 1], N)
