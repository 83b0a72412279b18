"""Multimodular tools: prime streams, CRT, rational reconstruction, nullspaces mod p.

Large guessing systems (hundreds of unknowns, entries with dozens of digits)
are solved modulo word-size primes and lifted back; every lifted answer is
checked exactly before being returned, so the modular route never decides
correctness on its own.
"""
from __future__ import annotations

import math
from functools import reduce
from typing import Iterator, Sequence

import gmpy2
import numpy as np
from gmpy2 import mpq, mpz

from .matrix import RatMatrix, _integer_rows, normalize_first_nonzero

# residues stay below 2**31 so that products fit in int64
DEFAULT_PRIME_CEILING = 2**31


def primes_below(ceiling: int, congruent_one_mod: int = 1) -> Iterator[int]:
    """Primes ``p < ceiling`` in decreasing order with ``p = 1 mod congruent_one_mod``."""
    m = congruent_one_mod
    p = ((ceiling - 2) // m) * m + 1
    while p > 2:
        if gmpy2.is_prime(p):
            yield int(p)
        p -= m


def crt_pair(r1: mpz, m1: mpz, r2: int, m2: int) -> tuple[mpz, mpz]:
    """Combine ``x = r1 mod m1`` and ``x = r2 mod m2`` into ``x mod m1*m2``."""
    inv = gmpy2.invert(m1 % m2, m2)
    t = ((r2 - r1) * inv) % m2
    return r1 + m1 * t, m1 * m2


def symmetric(r: mpz, m: mpz) -> mpz:
    r %= m
    return r - m if 2 * r > m else r


def rational_reconstruct(a: mpz, m: mpz, bound: mpz | None = None) -> mpq | None:
    """``n/d`` with ``n = a d mod m``, ``|n|, d <= bound`` (default ``sqrt(m/2)``)."""
    a = mpz(a) % m
    if bound is None:
        bound = gmpy2.isqrt(m // 2)
    r0, r1 = mpz(m), a
    t0, t1 = mpz(0), mpz(1)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound or math.gcd(int(r1), int(t1)) != 1:
        return None
    return mpq(r1, t1)


def rref_mod_p(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form modulo ``p`` of an int64 matrix with entries in [0, p)."""
    a = a.copy() % p
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        rows = np.nonzero(col)[0]
        if rows.size:
            a[rows] = (a[rows] - (col[rows, None] * a[r][None, :]) % p) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace_mod_p(a: np.ndarray, p: int) -> tuple[list[int], np.ndarray]:
    """Pivot columns and reduced kernel basis (one row per free column) mod ``p``."""
    red, pivots = rref_mod_p(a, p)
    n = a.shape[1]
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for r, c in enumerate(pivots):
            basis[k, c] = (-red[r, f]) % p
    return pivots, basis


def _reduce_rows_mod(rows: Sequence[Sequence[mpz]], p: int) -> np.ndarray:
    return np.array([[int(x % p) for x in r] for r in rows], dtype=np.int64)


def modular_kernel_basis(
    m: RatMatrix | Sequence[Sequence],
    max_primes: int = 2000,
    prime_ceiling: int = DEFAULT_PRIME_CEILING,
) -> list[tuple[mpq, ...]]:
    """Right nullspace via CRT + rational reconstruction, verified exactly.

    Returns the same normalized basis as ``kernel_basis`` (each vector has a
    single 1 at its free column and the others zero there, then is scaled so
    the first nonzero entry is 1).
    """
    if not isinstance(m, RatMatrix):
        m = RatMatrix(m)
    rows = _integer_rows(m.rows)
    n = m.ncols
    ref_pivots: tuple[int, ...] | None = None
    acc: np.ndarray | None = None  # object array of mpz residues
    modulus = mpz(1)
    last: list[tuple[mpq, ...]] | None = None
    used = 0
    for p in primes_below(prime_ceiling):
        if used >= max_primes:
            break
        used += 1
        pivots, basis = nullspace_mod_p(_reduce_rows_mod(rows, p), p)
        piv = tuple(pivots)
        if ref_pivots is not None and piv != ref_pivots:
            # larger rank (lexicographically earlier pivots) means the old primes were unlucky
            if len(piv) > len(ref_pivots) or (len(piv) == len(ref_pivots) and piv < ref_pivots):
                ref_pivots, acc, modulus, last = None, None, mpz(1), None
            else:
                continue
        if ref_pivots is None:
            ref_pivots = piv
            if basis.shape[0] == 0:
                return []
            acc = np.array([[mpz(int(x)) for x in row] for row in basis], dtype=object)
            modulus = mpz(p)
            continue
        for k in range(basis.shape[0]):
            for j in range(n):
                acc[k, j], _ = crt_pair(acc[k, j], modulus, int(basis[k, j]), p)
        modulus *= p
        cand = _reconstruct_basis(acc, modulus)
        if cand is not None and cand == last:
            if _verify_kernel(rows, cand):
                return [normalize_first_nonzero(v) for v in cand]
        last = cand
    raise ArithmeticError("modular kernel computation did not stabilize")


def _reconstruct_basis(acc: np.ndarray, modulus: mpz) -> list[tuple[mpq, ...]] | None:
    out = []
    for row in acc:
        den = mpz(1)
        vec = []
        for x in row:
            r = rational_reconstruct(x * den % modulus, modulus)
            if r is None:
                return None
            vec.append(r / den)
            den *= r.denominator
        out.append(tuple(vec))
    return out


def _verify_kernel(rows: Sequence[Sequence[mpz]], basis: Sequence[Sequence[mpq]]) -> bool:
    for v in basis:
        d = reduce(lambda x, y: x * y // math.gcd(x, y), (x.denominator for x in v), mpz(1))
        iv = [mpz(x * d) for x in v]
        nz = [(j, x) for j, x in enumerate(iv) if x != 0]
        for r in rows:
            if sum(r[j] * x for j, x in nz) != 0:
                return False
    return True
