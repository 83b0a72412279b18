"""Floating-point cross-check: direct 2-D integration of the chi3 integrand.

The integrand is smooth and 2*pi-periodic in both angles, so the tensor
trapezoid rule converges geometrically; the grid is doubled until two
successive estimates agree to the requested tolerance.
"""
from __future__ import annotations

import numpy as np


class QuadratureError(RuntimeError):
    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate {estimate!r}, error {error!r})")
        self.estimate = estimate
        self.error = error


def _xy(w: float, phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = 1.0 / (2.0 * w) - np.cos(phi)
    root = np.sqrt(a * a - 1.0)
    x = np.sign(a) / (np.abs(a) + root)
    y = 2.0 * x / (1.0 - x * x)
    return x, y


def integrand_mean(w: float, n: int) -> float:
    """Mean of the chi3 integrand over an ``n x n`` grid of angles."""
    phi = 2.0 * np.pi * np.arange(n) / n
    p1, p2 = np.meshgrid(phi, phi, indexing="ij")
    p3 = -(p1 + p2)
    x1, y1 = _xy(w, p1)
    x2, y2 = _xy(w, p2)
    x3, y3 = _xy(w, p3)
    s1, s2, s3 = np.sin(p1), np.sin(p2), np.sin(p3)
    f23 = (s2 - s3) * x2 * x3 / (1.0 - x2 * x3)
    f31 = (s3 - s1) * x3 * x1 / (1.0 - x3 * x1)
    big = x1 * x2 * x3
    val = y1 * y2 * y3 * (1.0 + big) / (1.0 - big) * f23 * (f31 + 0.5 * f23)
    return float(val.mean())


def chi3_quadrature(w: float, rel_tol: float = 1e-10, max_points: int = 4096) -> float:
    """chi3(w)/8 by periodic trapezoid quadrature; raises ``QuadratureError`` on non-convergence."""
    if not abs(w) < 0.25:
        raise ValueError("quadrature requires |w| < 1/4")
    if rel_tol < 1e-12:
        raise ValueError("rel_tol must be >= 1e-12")
    if w == 0:
        return 0.0
    n = 16
    prev = integrand_mean(w, n) / 8.0
    while True:
        n *= 2
        cur = integrand_mean(w, n) / 8.0
        err = abs(cur - prev)
        if err <= rel_tol * abs(cur) or (cur == 0.0 and err == 0.0):
            return cur
        if n >= max_points:
            raise QuadratureError("trapezoid refinement did not converge", cur, err)
        prev = cur


def series_partial_sum(coeffs, w: float) -> float:
    """Float value of ``sum c_n w^n`` (exact coefficients, Horner in floats)."""
    acc = 0.0
    for c in reversed(list(coeffs)):
        acc = acc * w + float(c)
    return acc


__all__ = ["QuadratureError", "chi3_quadrature", "integrand_mean", "series_partial_sum"]
