"""Production route for the chi3/8 series: multimodular root-of-unity grid.

The angular average of a Laurent polynomial in ``t1, t2`` whose exponents
stay below ``M`` in absolute value equals its mean over the ``M x M`` grid
of M-th roots of unity.  Through order ``w^N`` the integrand's harmonics are
bounded by ``N - 5``, so ``M = N + 1`` points per angle are exact.  The grid
sum is computed modulo primes ``p = 1 mod M`` (which contain the M-th roots
of unity), and the integer coefficients are recovered by CRT under a
rigorous majorant bound.

Writing ``D_i = t_i - 1/t_i`` and ``g_ij = x_i x_j / (1 - x_i x_j)``,
``H = -(1/8) D23 g23 (2 D31 g31 + D23 g23)``, so with
``T = CT(y1 y2 y3 (1+X)/(1-X) D23 g23 (2 D31 g31 + D23 g23))`` the result is
``chi3/8 = -T/64``.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpz

from ..exactalg import Series
from ..exactalg.modular import crt_pair, primes_below, symmetric
from .backend import grid_kernel

log = logging.getLogger(__name__)

PRIME_CEILING = 2**26  # keeps 2048 residue products inside a uint64 accumulator
MAX_ORDER = 2000


@dataclass(frozen=True)
class ChiSeries:
    series: Series
    normalization: str = "chi3_over_8"

    @property
    def generated_order(self) -> int:
        return self.series.order

    def coefficients(self) -> list[int]:
        return [int(c) for c in self.series]


def root_of_unity(M: int, p: int) -> int:
    """An element of exact multiplicative order ``M`` modulo ``p`` (needs ``M | p-1``)."""
    if (p - 1) % M:
        raise ValueError("M must divide p - 1")
    qs = [q for q in range(2, M + 1) if M % q == 0 and gmpy2.is_prime(q)]
    for a in range(2, p):
        w = pow(a, (p - 1) // M, p)
        if all(pow(w, M // q, p) != 1 for q in qs):
            return w
    raise ArithmeticError("no primitive root of unity found")


def grid_tables(N: int, p: int, M: int, omega: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Series of x and y at every grid point, and ``t - 1/t``, all mod p."""
    L = N + 1
    t = np.array([pow(omega, i, p) for i in range(M)], dtype=np.uint64)
    tinv = np.array([pow(omega, (M - i) % M, p) for i in range(M)], dtype=np.uint64)
    s = (t + tinv) % p
    x = np.zeros((M, L), dtype=np.uint64)
    if L > 1:
        x[:, 1] = 1
    # x = w (1 + s x + x^2)
    for n in range(2, L):
        acc = s * x[:, n - 1] % p
        if n > 2:
            acc += (x[:, 1 : n - 1] * x[:, n - 2 : 0 : -1]).sum(axis=1) % p
        x[:, n] = acc % p
    # y (1 - x^2) = 2 x
    x2 = np.zeros((M, L), dtype=np.uint64)
    for n in range(2, L):
        x2[:, n] = (x[:, 1:n] * x[:, n - 1 : 0 : -1]).sum(axis=1) % p
    y = np.zeros((M, L), dtype=np.uint64)
    for n in range(L):
        acc = 2 * x[:, n] % p
        if n >= 2:
            acc += (x2[:, 2 : n + 1] * y[:, n - 2 :: -1]).sum(axis=1) % p
        y[:, n] = acc % p
    d = (t + p - tinv) % p
    return x.astype(np.uint32), y.astype(np.uint32), d.astype(np.uint32)


def residues_mod_prime(N: int, p: int, backend: str | None = None) -> list[int]:
    """``T_n mod p`` for ``n = 0..N`` (see module docstring)."""
    M = N + 1
    omega = root_of_unity(M, p)
    X, Y, D = grid_tables(N, p, M, omega)
    total = grid_kernel(backend)(X, Y, D, p)
    inv = pow(M * M, -1, p)
    return [int(v) * inv % p for v in total]


def _int_mul(a: list[int], b: list[int]) -> list[int]:
    L = len(a)
    out = [0] * L
    for i, x in enumerate(a):
        if x:
            for j in range(L - i):
                out[i + j] += x * b[j]
    return out


def _int_geo(a: list[int]) -> list[int]:
    """``a / (1 - a)`` for a series with zero constant term."""
    L = len(a)
    g = [0] * L
    for n in range(1, L):
        g[n] = a[n] + sum(a[j] * g[n - j] for j in range(1, n))
    return g


def coefficient_bounds(N: int) -> list[int]:
    """Upper bounds on ``|T_n|`` from the all-positive majorant of the integrand.

    Every Laurent coefficient of x and y is nonnegative, so their absolute sums
    are the values at ``t = 1``: ``x = w (1 + x)^2``.  Each ``D`` difference has
    absolute sum at most 4, so the ``H'`` factor is bounded by ``48 g^2``.
    """
    L = N + 1
    x = [0] * L
    if L > 1:
        x[1] = 1
    for n in range(2, L):
        # x = w (1 + 2x + x^2)
        x[n] = 2 * x[n - 1] + sum(x[j] * x[n - 1 - j] for j in range(1, n - 1))
    x2 = _int_mul(x, x)
    y = _int_mul([2 * c for c in x], [1] + _int_geo(x2)[1:])
    g = _int_geo(x2)
    big_x = _int_mul(x2, x)
    e = [1] + [2 * c for c in _int_geo(big_x)[1:]]
    h = [48 * c for c in _int_mul(g, g)]
    return _int_mul(_int_mul(_int_mul(_int_mul(y, y), y), e), h)


def primes_for_order(N: int) -> list[int]:
    """Grid primes whose product exceeds twice every coefficient bound."""
    need = 2 * max(coefficient_bounds(N)) + 1
    out = []
    prod = 1
    for p in primes_below(PRIME_CEILING, N + 1):
        out.append(p)
        prod *= p
        if prod > need:
            return out
    raise ArithmeticError("ran out of grid primes")


def combine_residues(N: int, primes: Sequence[int], residues: Sequence[Sequence[int]]) -> list[int]:
    """CRT the per-prime residues of ``T`` and return ``chi3/8 = -T/64``."""
    coeffs = []
    modulus = mpz(1)
    acc = [mpz(0)] * (N + 1)
    for p, res in zip(primes, residues):
        for n in range(N + 1):
            acc[n], _ = crt_pair(acc[n], modulus, res[n], p)
        modulus *= p
    for n in range(N + 1):
        t = symmetric(acc[n], modulus)
        if t % 64:
            raise ArithmeticError(f"grid constant term at order {n} is not divisible by 64")
        coeffs.append(int(-t // 64))
    return coeffs


def chi3_series(
    N: int,
    threads: int = 1,
    backend: str | None = None,
    store=None,
    progress: Callable[[int, int], None] | None = None,
) -> ChiSeries:
    """chi3/8 through ``w^N`` with exact integer coefficients.

    ``threads`` sets the number of concurrently processed primes; the result
    does not depend on it.  ``store`` (a ``ResidueStore``) makes the run
    resumable: residues already recorded for this order are reused.
    """
    if N < 9:
        raise ValueError("chi3_series needs N >= 9")
    if N > MAX_ORDER:
        raise ValueError(f"chi3_series supports N <= {MAX_ORDER}")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    primes = primes_for_order(N)
    done = {}
    if store is not None:
        done = store.load(N)

    def work(p: int) -> list[int]:
        if p in done:
            return done[p]
        res = residues_mod_prime(N, p, backend)
        if store is not None:
            store.save(N, p, res)
        return res

    results: list[list[int]] = []
    if threads == 1:
        for k, p in enumerate(primes):
            results.append(work(p))
            if progress:
                progress(k + 1, len(primes))
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for k, res in enumerate(pool.map(work, primes)):
                results.append(res)
                if progress:
                    progress(k + 1, len(primes))
    log.info("chi3 order %d: %d primes", N, len(primes))
    return ChiSeries(Series(combine_residues(N, primes, results), N))
