"""Pure numpy fallback for the chi3 grid kernel (same contract as ``_kernel``)."""
from __future__ import annotations

import numpy as np


def _mul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Row-wise truncated product mod p; rows are series of equal length."""
    L = a.shape[-1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=np.uint64)
    for j in range(L):
        col = a[..., j : j + 1]
        if not col.any():
            continue
        out[..., j:] += col * b[..., : L - j]
        if j % 1024 == 1023:
            out %= p
    return out % p


def _geo(P: np.ndarray, p: int) -> np.ndarray:
    """Row-wise ``P / (1 - P)`` for series with zero constant term."""
    L = P.shape[-1]
    g = np.zeros(P.shape, dtype=np.uint64)
    for n in range(1, L):
        acc = P[..., n].copy()
        if n > 1:
            acc += (P[..., 1:n] * g[..., n - 1 : 0 : -1]).sum(axis=-1)
        g[..., n] = acc % p
    return g


def chi3_grid_sum(X: np.ndarray, Y: np.ndarray, D: np.ndarray, p: int) -> np.ndarray:
    """Grid sum of ``y1 y2 y3 (1+X)/(1-X) H'`` mod p (not divided by M**2).

    ``X[i]``, ``Y[i]`` are the truncated series of x and y at the i-th root
    of unity and ``D[i] = t_i - 1/t_i``.  Only rows ``i3 <= M/2`` are
    evaluated; ``t -> 1/t`` symmetry supplies the rest.
    """
    X = X.astype(np.uint64)
    Y = Y.astype(np.uint64)
    D = D.astype(np.uint64)
    p = int(p)
    M, L = X.shape
    total = np.zeros(L, dtype=np.uint64)
    i1 = np.arange(M)
    for i3 in range(M // 2 + 1):
        weight = 1 if (i3 == 0 or 2 * i3 == M) else 2
        i2 = (2 * M - i1 - i3) % M
        P = _mul(X, X[i3][None, :], p)
        G = _geo(P, p)
        d23 = (D[i2] + p - D[i3]) % p
        d31 = (D[i3] + p - D[i1]) % p
        A = (d23[:, None] * G[i2]) % p
        B = (2 * d31[:, None] * G[i1] % p + A) % p
        Hs = _mul(A, B, p)
        E = (2 * _geo(_mul(X, P[i2], p), p)) % p
        E[:, 0] = (E[:, 0] + 1) % p
        YY = _mul(Y, Y[i3][None, :], p)
        F = _mul(_mul(Y, YY[i2], p), E, p)
        F = _mul(F, Hs, p)
        row = np.zeros(L, dtype=np.uint64)
        for start in range(0, M, 256):
            row = (row + F[start : start + 256].sum(axis=0) % p) % p
        total = (total + weight * row) % p
    return total
