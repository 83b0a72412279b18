"""Removing apparent singularities, and the first-order system form.

``desingularize`` looks for a left factor ``T = d^g + t_{g-1} d^{g-1} + ... + t_0``
with polynomial ``t_i`` such that every coefficient of ``T L`` is divisible by
``p^e`` (p the apparent locus, e its multiplicity in the leading coefficient).
Then ``(1/p^e) T L`` has polynomial coefficients, annihilates every solution
of L, and its leading coefficient is ``a_q / p^e``.  The ``t_i`` only matter
modulo ``p^e``, so the search is a linear system over Q.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence

from gmpy2 import mpq

from .diffop import DiffOp, RatFunc, right_divide
from .exactalg import (
    INFINITY,
    AlgebraicPoint,
    Poly,
    gcd,
    kernel_basis,
    modular_kernel_basis,
    rational_roots,
    squarefree_split,
)
from .frobenius import (
    fuchsian_check,
    indicial_exponents,
    is_apparent,
    local_form,
)


class PreconditionError(ValueError):
    pass


class DesingularizationError(ArithmeticError):
    def __init__(self, message: str, residual: Poly | None = None):
        super().__init__(message)
        self.residual = residual


def _locus_poly(pt) -> Poly:
    if isinstance(pt, AlgebraicPoint):
        return pt.min_poly
    if pt is INFINITY:
        raise PreconditionError("infinity cannot be desingularized by a left factor")
    x = mpq(pt)
    return Poly([-x.numerator, x.denominator])


def missing_exponents(L: DiffOp, pt) -> list[int]:
    """Nonnegative integers below the largest exponent that are not exponents."""
    if not is_apparent(L, pt):
        raise PreconditionError(f"{pt} is not an apparent singularity")
    ex = {int(r) for r, _ in indicial_exponents(L, pt)}
    return [k for k in range(max(ex)) if k not in ex]


@dataclass(frozen=True)
class DesingResult:
    operator: DiffOp
    left_factor: DiffOp  # rational coefficients; operator = left_factor * L
    removed_points: tuple
    leading_factorization: tuple  # (factor, exponent) pairs
    new_apparent: tuple = ()

    @property
    def gaps_filled(self) -> int:
        return self.left_factor.order


def _multiplicity(p: Poly, f: Poly) -> int:
    e = 0
    while True:
        q, r = divmod(p, f)
        if not r.is_zero():
            return e
        p, e = q, e + 1


def _leading_factorization(lead: Poly) -> tuple:
    out = []
    rest = lead
    for x, m in rational_roots(lead):
        lin = Poly([-x.numerator, x.denominator])
        out.append((lin.factor_normal(), m))
        rest = rest.exact_div(Poly([-x, 1]) ** m)
    for f, m in squarefree_split(rest):
        if f.degree > 0:
            out.append((f.factor_normal(), m))
    out.sort(key=lambda fm: (fm[0].degree, tuple(fm[0].c)))
    return tuple(out)


def _solve_left_factor(L: DiffOp, modulus: Poly, g: int) -> DiffOp | None:
    """Monic ``T`` of order g with ``T L = 0`` coefficientwise mod ``modulus``."""
    D = modulus.degree
    q = L.order

    def reduced(op: DiffOp) -> list[mpq]:
        vec = []
        for k in range(q + g + 1):
            r = op[k] % modulus
            vec.extend(r[i] for i in range(D))
        return vec

    columns = []
    for i in range(g):
        Di = DiffOp.d(i) * L
        for t in range(D):
            columns.append(reduced(DiffOp.mult(Poly.monomial(t)) * Di))
    columns.append(reduced(DiffOp.d(g) * L))
    rows = [list(r) for r in zip(*columns)]
    rows = [r for r in rows if any(x != 0 for x in r)]
    if not rows:
        ker = [[mpq(int(i == j)) for j in range(len(columns))] for i in range(len(columns))]
    elif len(columns) > 80:
        ker = modular_kernel_basis(rows)
    else:
        ker = kernel_basis(rows)
    # need a kernel vector with the last coordinate (coefficient of d^g) nonzero
    for vec in ker:
        if vec[-1] != 0:
            vec = [x / vec[-1] for x in vec]
            break
    else:
        return None
    coeffs = []
    for i in range(g):
        coeffs.append(Poly(vec[i * D : (i + 1) * D]))
    coeffs.append(Poly.const(1))
    return DiffOp(coeffs)


def desingularize(L: DiffOp, pts: Sequence) -> DesingResult:
    """Order ``q + g`` operator without the apparent loci ``pts``.

    g is the largest number of missing exponents among the loci.  Raises
    ``DesingularizationError`` if no monic left factor of that order clears
    the locus, carrying the factor that remained.
    """
    if not L.is_polynomial():
        L = L.primitive()
    pts = list(pts)
    if not pts:
        return DesingResult(L, DiffOp([Poly.const(1)]), (), _leading_factorization(L.leading))
    g = 0
    for pt in pts:
        g = max(g, len(missing_exponents(L, pt)))
    modulus = Poly.const(1)
    for pt in pts:
        f = _locus_poly(pt)
        e = _multiplicity(L.leading, f)
        if e == 0:
            raise PreconditionError(f"{pt} is not a root of the leading coefficient")
        modulus = modulus * f**e
    if g == 0:
        raise PreconditionError("no gap exponents to fill")
    T = _solve_left_factor(L, modulus, g)
    if T is None:
        raise DesingularizationError("no left factor clears the apparent locus", modulus)
    TL = T * L
    new = DiffOp([c.exact_div(modulus) for c in TL.coeffs])
    left = DiffOp([RatFunc(c, modulus) for c in T.coeffs])
    # certificates: the old operator divides on the right, removed points are ordinary
    if not right_divide(new, L).remainder.is_zero():
        raise DesingularizationError("right division check failed")
    residual = gcd(new.leading, modulus)
    if residual.degree > 0:
        raise DesingularizationError("apparent factor survived", residual)
    for pt in pts:
        form = local_form(new, pt)
        if not form.is_ordinary:
            raise DesingularizationError(f"{pt} is still singular", _locus_poly(pt))
    # any new finite singularity would have to come from the leading coefficient
    new_apparent = tuple(f for f, _ in _leading_factorization(new.leading) if not f.divides(L.leading))
    return DesingResult(new, left, tuple(pts), _leading_factorization(new.leading), new_apparent)


# -- first-order systems ---------------------------------------------------------
@dataclass(frozen=True)
class CompanionSystem:
    """``theta Y = A Y`` with ``theta = theta_factor * d/dw`` and Y = (y, theta y, ...).

    ``matrix`` is A (polynomial entries).  The connection ``A / theta_factor``
    is split as ``sum_i N_i / f_i + polynomial_part`` over the true singular
    factors f_i; ``residue_matrices`` holds the pairs ``(f_i, N_i)``, f_i
    primitive with positive lowest coefficient and N_i of degree below
    deg f_i (constant residue matrices for linear factors).
    """

    theta_factor: Poly
    matrix: tuple
    residue_matrices: tuple
    polynomial_part: tuple

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def polynomial_part_is_scalar(self) -> bool:
        n = self.dimension
        P = self.polynomial_part
        return all(P[i][j].is_zero() for i in range(n) for j in range(n) if i != j) and all(
            P[i][i] == P[0][0] for i in range(n)
        )


def _theta_form(L: DiffOp, h: Poly) -> list[RatFunc]:
    """Coefficients c_k with ``L = sum c_k theta^k``, ``theta = h d``."""
    q = L.order
    hr = RatFunc.lift(h)
    # d^k = sum_j e[k][j] theta^j, from d^(k+1) = (1/h) theta d^k
    e = [[RatFunc.lift(1)]]
    for k in range(q):
        cur = e[-1]
        nxt = [RatFunc(Poly())] * (len(cur) + 1)
        for j, c in enumerate(cur):
            nxt[j] = nxt[j] + c.derivative()
            nxt[j + 1] = nxt[j + 1] + c / hr
        e.append(nxt)
    out = [RatFunc(Poly())] * (q + 1)
    for k, a in enumerate(L.coeffs):
        ak = RatFunc.lift(a)
        for j, c in enumerate(e[k]):
            out[j] = out[j] + ak * c
    return out


def _partial_fractions(num: Poly, factors: Sequence[Poly]) -> tuple[list[Poly], Poly]:
    """``num / prod(factors) = sum N_i / f_i + P`` for pairwise coprime squarefree f_i."""
    from .exactalg import xgcd

    den = reduce(lambda a, b: a * b, factors, Poly.const(1))
    P, r = divmod(num, den)
    parts = []
    for f in factors:
        cof = den.exact_div(f)
        _, s, _ = xgcd(cof, f)  # s * cof = 1 mod f
        parts.append((r * s) % f)
    return parts, P


def companion_system(L: DiffOp) -> CompanionSystem:
    """Cyclic-vector system for a Fuchsian operator, in the derivation ``h d/dw``.

    h is the product of the distinct finite singular factors of L, so an
    operator with apparent points should be desingularized first.
    """
    if not L.is_polynomial():
        L = L.primitive()
    report = fuchsian_check(L)
    if not report.is_fuchsian:
        raise PreconditionError("companion_system needs a Fuchsian operator")
    true_factors = [f for f, _ in _leading_factorization(L.leading)]
    h = reduce(lambda a, b: a * b, true_factors, Poly.const(1))
    c = _theta_form(L, h)
    q = L.order
    lead = c[q]
    n = q
    A = [[Poly() for _ in range(n)] for _ in range(n)]
    for i in range(n - 1):
        A[i][i + 1] = Poly.const(1)
    for k in range(q):
        r = -c[k] / lead
        if not r.is_polynomial():
            raise PreconditionError("theta-form coefficients are not polynomial; apparent points remain")
        A[n - 1][k] = r.as_poly()
    residues = []
    poly_part = [[Poly() for _ in range(n)] for _ in range(n)]
    split = [[_partial_fractions(A[i][j], true_factors) for j in range(n)] for i in range(n)]
    for idx, f in enumerate(true_factors):
        residues.append((f, tuple(tuple(split[i][j][0][idx] for j in range(n)) for i in range(n))))
    for i in range(n):
        for j in range(n):
            poly_part[i][j] = split[i][j][1]
    return CompanionSystem(
        h,
        tuple(tuple(r) for r in A),
        tuple(residues),
        tuple(tuple(r) for r in poly_part),
    )


def scalar_equation(system: CompanionSystem) -> DiffOp:
    """Eliminate ``Y_2..Y_q`` from ``theta Y = A Y`` and return the equation for ``Y_1``.

    Works for any matrix A (not only companion ones) by the cyclic-vector
    recursion ``v_{k+1} = theta(v_k) + v_k A``.
    """
    h = RatFunc.lift(system.theta_factor)
    n = system.dimension
    A = [[RatFunc.lift(x) for x in row] for row in system.matrix]
    vs = [[RatFunc.lift(int(j == 0)) for j in range(n)]]
    for _ in range(n):
        v = vs[-1]
        nxt = []
        for j in range(n):
            acc = h * v[j].derivative()
            for i in range(n):
                if not v[i].is_zero() and not A[i][j].is_zero():
                    acc = acc + v[i] * A[i][j]
            nxt.append(acc)
        vs.append(nxt)
    # solve v_n = sum beta_k v_k over Q(w) (v_0..v_{n-1} independent)
    beta = _solve_rational([vs[k] for k in range(n)], vs[n])
    # theta^n - sum beta_k theta^k, converted to d-form
    theta = DiffOp([RatFunc(Poly()), h])
    out = DiffOp([RatFunc(Poly())])
    powk = DiffOp([RatFunc.lift(1)])
    for k in range(n + 1):
        coef = RatFunc.lift(1) if k == n else -beta[k]
        out = out + DiffOp.mult(coef) * powk
        powk = theta * powk
    return out.primitive()


def _solve_rational(basis: list[list[RatFunc]], target: list[RatFunc]) -> list[RatFunc]:
    """Coefficients x with ``sum x_k basis[k] = target`` (square, nonsingular)."""
    n = len(basis)
    M = [[basis[k][j] for k in range(n)] + [target[j]] for j in range(n)]
    for col in range(n):
        piv = next(i for i in range(col, n) if not M[i][col].is_zero())
        M[col], M[piv] = M[piv], M[col]
        inv = M[col][col].inverse()
        M[col] = [x * inv for x in M[col]]
        for i in range(n):
            if i != col and not M[i][col].is_zero():
                fct = M[i][col]
                M[i] = [a - fct * b for a, b in zip(M[i], M[col])]
    return [M[k][n] for k in range(n)]


__all__ = [
    "CompanionSystem",
    "DesingResult",
    "DesingularizationError",
    "PreconditionError",
    "companion_system",
    "desingularize",
    "missing_exponents",
    "scalar_equation",
]
