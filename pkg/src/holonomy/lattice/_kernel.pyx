# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled grid kernel for the chi3 angular constant term modulo a prime.

All residues are kept below 2**26 so that up to 2048 products of two
residues fit in an unsigned 64-bit accumulator without reduction.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint32_t, uint64_t
from libc.stdlib cimport malloc, free
from libc.string cimport memset

cnp.import_array()

ctypedef uint32_t u32
ctypedef uint64_t u64


cdef inline void mul_trunc(const u32* a, int va, const u32* b, int vb,
                           u32* out, int L, u64 p) noexcept nogil:
    # out = a*b mod (w^L, p); a has valuation >= va, b >= vb
    cdef int n, j, lo, hi
    cdef u64 acc
    for n in range(va + vb):
        if n < L:
            out[n] = 0
    for n in range(va + vb, L):
        acc = 0
        lo = va
        hi = n - vb
        for j in range(lo, hi + 1):
            acc += <u64>a[j] * b[n - j]
        out[n] = <u32>(acc % p)


cdef inline void geo_trunc(const u32* P, int vp, u32* g, int L, u64 p) noexcept nogil:
    # g = P/(1-P), i.e. g_n = P_n + sum_{j>=vp} P_j g_{n-j}; requires vp >= 1
    cdef int n, j
    cdef u64 acc
    for n in range(L):
        acc = P[n] if n >= vp else 0
        for j in range(vp, n - vp + 1):
            acc += <u64>P[j] * g[n - j]
        g[n] = <u32>(acc % p)


def chi3_grid_sum(cnp.ndarray[cnp.uint32_t, ndim=2] X,
                  cnp.ndarray[cnp.uint32_t, ndim=2] Y,
                  cnp.ndarray[cnp.uint32_t, ndim=1] D,
                  unsigned long long p):
    """Sum of the chi3 integrand series over the root-of-unity grid, mod p.

    ``X[i]``, ``Y[i]`` are the truncated series of x and y at the i-th
    M-th root of unity, ``D[i] = t_i - 1/t_i``.  Returns the length-L
    series of the grid sum (not yet divided by M**2).
    """
    cdef int M = X.shape[0]
    cdef int L = X.shape[1]
    cdef u64 pp = p
    cdef u32* Xp = <u32*> X.data
    cdef u32* Yp = <u32*> Y.data
    cdef u32* Dp = <u32*> D.data
    cdef u32* P = <u32*> malloc(M * L * sizeof(u32))
    cdef u32* G = <u32*> malloc(M * L * sizeof(u32))
    cdef u32* YY = <u32*> malloc(M * L * sizeof(u32))
    cdef u32* T1 = <u32*> malloc(L * sizeof(u32))
    cdef u32* T2 = <u32*> malloc(L * sizeof(u32))
    cdef u32* E = <u32*> malloc(L * sizeof(u32))
    cdef u32* A = <u32*> malloc(L * sizeof(u32))
    cdef u32* B = <u32*> malloc(L * sizeof(u32))
    cdef u32* Hs = <u32*> malloc(L * sizeof(u32))
    cdef u32* F = <u32*> malloc(L * sizeof(u32))
    cdef u64* row = <u64*> malloc(L * sizeof(u64))
    cdef u64* tot = <u64*> malloc(L * sizeof(u64))
    cdef int i1, i2, i3, j, n, lo
    cdef u64 weight, d23, d31, acc
    out = np.zeros(L, dtype=np.uint64)
    cdef u64[:] outv = out
    try:
        with nogil:
            memset(tot, 0, L * sizeof(u64))
            for i3 in range(M // 2 + 1):
                if i3 == 0 or 2 * i3 == M:
                    weight = 1
                else:
                    weight = 2
                for j in range(M):
                    mul_trunc(Xp + j * L, 1, Xp + i3 * L, 1, P + j * L, L, pp)
                    geo_trunc(P + j * L, 2, G + j * L, L, pp)
                    mul_trunc(Yp + j * L, 1, Yp + i3 * L, 1, YY + j * L, L, pp)
                memset(row, 0, L * sizeof(u64))
                for i1 in range(M):
                    i2 = (2 * M - i1 - i3) % M
                    d23 = (Dp[i2] + pp - Dp[i3]) % pp
                    d31 = (Dp[i3] + pp - Dp[i1]) % pp
                    # E = 1 + 2 X/(1 - X), X = x1 x2 x3
                    mul_trunc(Xp + i1 * L, 1, P + i2 * L, 2, T1, L, pp)
                    geo_trunc(T1, 3, T2, L, pp)
                    E[0] = 1
                    for n in range(1, L):
                        E[n] = <u32>((2 * <u64>T2[n]) % pp)
                    # H' = D23 g23 (2 D31 g31 + D23 g23)
                    for n in range(L):
                        A[n] = <u32>((d23 * G[i2 * L + n]) % pp)
                        B[n] = <u32>((2 * d31 * G[i1 * L + n] + A[n]) % pp)
                    mul_trunc(A, 2, B, 2, Hs, L, pp)
                    # Y = y1 y2 y3
                    mul_trunc(Yp + i1 * L, 1, YY + i2 * L, 2, T1, L, pp)
                    mul_trunc(T1, 3, E, 0, F, L, pp)
                    for n in range(7, L):
                        acc = 0
                        for j in range(3, n - 4 + 1):
                            acc += <u64>F[j] * Hs[n - j]
                        row[n] = (row[n] + acc % pp) % pp
                for n in range(L):
                    tot[n] = (tot[n] + weight * row[n]) % pp
            for n in range(L):
                outv[n] = tot[n]
    finally:
        free(P); free(G); free(YY); free(T1); free(T2); free(E)
        free(A); free(B); free(Hs); free(F); free(row); free(tot)
    return out
