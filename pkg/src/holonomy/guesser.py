"""Find a linear ODE with polynomial coefficients that annihilates a truncated series.

The ansatz ``sum_k sum_j c_kj w^j f^(k)`` is matched coefficient by
coefficient; its nullspace gives the candidate operator, which must then
annihilate every further coefficient the series provides.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .diffop import DiffOp
from .exactalg import Poly, Series, kernel_basis, modular_kernel_basis

# ansatz sizes above this go through the multimodular solver
MODULAR_THRESHOLD = 80


class InsufficientData(ValueError):
    """No ansatz in the schedule fits the available coefficients."""


class SurplusFailure(ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"operator does not annihilate the series at coefficient {index}")
        self.index = index


@dataclass(frozen=True)
class GuessConfig:
    """``degrees``: uniform max degree (int) or per-derivative list, highest derivative first."""

    max_order: int = 4
    degrees: int | Sequence[int] | None = None
    min_surplus: int = 10

    def __post_init__(self):
        if self.min_surplus < 1:
            raise ValueError("min_surplus must be >= 1")
        if self.max_order < 1:
            raise ValueError("max_order must be >= 1")
        if self.degrees is not None and not isinstance(self.degrees, int):
            if not len(self.degrees):
                raise ValueError("degree schedule is empty")
            if any(d < 0 for d in self.degrees):
                raise ValueError("degrees must be nonnegative")


@dataclass(frozen=True)
class GuessResult:
    operator: DiffOp
    order: int
    degrees: tuple[int, ...]  # highest derivative first
    surplus_verified: int
    used_through: int = 0
    unknowns: int = field(default=0)


def _rising(m: int, k: int) -> int:
    out = 1
    for i in range(1, k + 1):
        out *= m + i
    return out


def derivative_table(f: Series, q: int) -> list[list[mpq]]:
    """``tab[k][m] = [w^m] f^(k)`` for ``m <= trunc - k``."""
    N = f.order
    return [[f[m + k] * _rising(m, k) for m in range(N - k + 1)] for k in range(q + 1)]


def ansatz_rows(tab: list[list[mpq]], degs: Sequence[int], n_eqs: int) -> list[list[mpq]]:
    """Rows for coefficients ``w^0 .. w^(n_eqs-1)``; ``degs[k]`` is the degree of ``a_k``."""
    rows = []
    zero = mpq(0)
    for n in range(n_eqs):
        row = []
        for k, dk in enumerate(degs):
            col = tab[k]
            for j in range(dk + 1):
                m = n - j
                row.append(col[m] if m >= 0 else zero)
        rows.append(row)
    return rows


def _operator_from_vector(vec: Sequence[mpq], degs: Sequence[int]) -> DiffOp:
    coeffs = []
    pos = 0
    for dk in degs:
        coeffs.append(Poly(vec[pos : pos + dk + 1]))
        pos += dk + 1
    return DiffOp(coeffs)


def verify_surplus(L: DiffOp, f: Series, used_through: int) -> int:
    """Count of indices in ``(used_through, trunc(f)]`` where ``L f`` vanishes.

    Series index ``i`` is covered by residual coefficient ``i - q``.  Raises
    ``SurplusFailure`` at the first nonzero residual in that range.
    """
    if f.order <= used_through:
        raise ValueError("no surplus coefficients beyond used_through")
    q = L.order
    res = L.apply(f)
    for i in range(used_through + 1, f.order + 1):
        if res[i - q] != 0:
            raise SurplusFailure(i)
    # residuals below the solved range must vanish too (soundness)
    for n in range(0, min(used_through + 1 - q, res.order + 1)):
        if res[n] != 0:
            raise SurplusFailure(n + q)
    return f.order - used_through


def _solve(rows: list[list[mpq]]) -> list:
    if not rows:
        return []
    if len(rows[0]) > MODULAR_THRESHOLD:
        return modular_kernel_basis(rows)
    return kernel_basis(rows)


def try_ansatz(f: Series, degs_low_first: Sequence[int], min_surplus: int, tab=None):
    """Solve one ansatz.  Returns ``(operator, used_through)`` or ``None``.

    The system uses the fewest equations that leave a one-dimensional
    kernel; everything beyond is surplus.
    """
    q = len(degs_low_first) - 1
    U = sum(d + 1 for d in degs_low_first)
    N = f.order
    max_eqs = N - q + 1 - min_surplus
    if max_eqs < U - 1:
        return None
    if tab is None:
        tab = derivative_table(f, q)
    n_eqs = min(U + 1, max_eqs)
    while True:
        rows = ansatz_rows(tab, degs_low_first, n_eqs)
        ker = _solve(rows)
        if not ker:
            return None
        if len(ker) == 1:
            L = _operator_from_vector(ker[0], degs_low_first)
            used = n_eqs - 1 + q
            if L.order != q:
                return None
            try:
                verify_surplus(L, f, used)
            except SurplusFailure:
                return None
            return L.primitive(), used
        if n_eqs >= max_eqs:
            return None  # ambiguous ansatz: reject
        n_eqs = min(max_eqs, n_eqs + max(U // 4, 4))


def _shave(f: Series, degs: list[int], min_surplus: int, best, tab):
    """Lower each degree (highest derivative first) while a candidate survives."""
    changed = True
    while changed:
        changed = False
        for k in range(len(degs) - 1, -1, -1):
            while degs[k] > 0:
                trial = list(degs)
                trial[k] -= 1
                got = try_ansatz(f, trial, min_surplus, tab)
                if got is None:
                    break
                degs, best = trial, got
                changed = True
    return degs, best


def guess_ode(f: Series, cfg: GuessConfig = GuessConfig()) -> GuessResult | None:
    """Scan order ``q`` upward, then uniform degree ``d`` upward, then shave degrees.

    An explicit per-derivative degree list is tried as given (no scan).
    """
    if isinstance(cfg.degrees, (list, tuple)):
        degs = list(reversed(cfg.degrees))
        q = len(degs) - 1
        U = sum(d + 1 for d in degs)
        if f.order - q + 1 - cfg.min_surplus < U - 1:
            raise InsufficientData(
                f"{U} unknowns need at least {U - 1 + q + cfg.min_surplus} as truncation order, series has {f.order}"
            )
        got = try_ansatz(f, degs, cfg.min_surplus)
        if got is None:
            return None
        L, used = got
        return GuessResult(L, q, tuple(reversed(degs)), f.order - used, used, U)

    any_feasible = False
    for q in range(1, cfg.max_order + 1):
        tab = derivative_table(f, q)
        d = 0
        while True:
            if isinstance(cfg.degrees, int) and d > cfg.degrees:
                break
            U = (q + 1) * (d + 1)
            if f.order - q + 1 - cfg.min_surplus < U - 1:
                break
            any_feasible = True
            degs = [d] * (q + 1)
            got = try_ansatz(f, degs, cfg.min_surplus, tab)
            if got is not None:
                degs, (L, used) = _shave(f, degs, cfg.min_surplus, got, tab)
                final = [max(c.degree, 0) for c in L.coeffs]
                return GuessResult(
                    L, L.order, tuple(reversed(final)), f.order - used, used, sum(x + 1 for x in degs)
                )
            d += 1
    if not any_feasible:
        raise InsufficientData("series too short for every ansatz in the schedule")
    return None


__all__ = [
    "GuessConfig",
    "GuessResult",
    "InsufficientData",
    "SurplusFailure",
    "guess_ode",
    "try_ansatz",
    "verify_surplus",
]

