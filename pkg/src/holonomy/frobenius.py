"""Local analysis of linear ODEs at regular singular points.

Every point is moved to the origin of a local variable ``x`` (``w - a``,
``w - alpha`` for an algebraic locus, ``1/w`` at infinity) and the operator
is written as ``x^mu * sum_j x^j P_j(theta)`` with ``theta = x d/dx``.  ``P_0``
is the indicial polynomial.  Algebraic loci are handled in ``Q[w]/(p)``; a
zero divisor met along the way raises ``DiscoveredFactor`` and the caller
splits the locus.

Local solutions are kept as coefficient arrays ``c[n][l]`` for
``x^(rho+n) * log(x)^l / l!``; theta acts on them as ``(rho+n) + S`` with
``S`` the shift ``l+1 -> l``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from gmpy2 import mpq

from .diffop import DiffOp, RatFunc
from .exactalg import (
    INFINITY,
    AlgebraicPoint,
    DiscoveredFactor,
    Poly,
    Series,
    gcd,
    gcd_many,
    interpolate,
    location_key,
    rational_roots,
    resultant,
    squarefree_split,
)
from .exactalg.quotient import QuotientRing, Residue


class IrregularSingularity(ValueError):
    def __init__(self, location):
        super().__init__(f"irregular singular point at {location}")
        self.location = location


class UnresolvedExponents(ArithmeticError):
    """Some indicial roots are not rational; ``residual`` holds their polynomial."""

    def __init__(self, location, residual):
        super().__init__(f"non-rational exponents at {location}")
        self.location = location
        self.residual = residual


# -- coefficient fields ---------------------------------------------------------
class _Rationals:
    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def is_zero(self, x) -> bool:
        return x == 0

    def inv(self, x):
        return 1 / x

    def lift(self, x):
        return mpq(x)


class _Algebraic:
    """``Q[w]/(p)``; ``is_zero`` refuses to answer for zero divisors."""

    def __init__(self, p: Poly):
        self.p = p
        self.ring = QuotientRing(p)
        self.zero = self.ring.zero()
        self.one = self.ring.one()

    def is_zero(self, x: Residue) -> bool:
        if x.poly.is_zero():
            return True
        if x.poly.degree > 0:
            g = gcd(x.poly, self.p)
            if g.degree > 0:
                raise DiscoveredFactor(g.factor_normal(), self.p)
        return False

    def inv(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverting zero at an algebraic point")
        return x.inverse()

    def lift(self, x):
        return self.ring(x)


def _as_location(pt):
    if pt is INFINITY or isinstance(pt, AlgebraicPoint):
        return pt
    if isinstance(pt, Fraction):
        return mpq(pt.numerator, pt.denominator)
    return mpq(pt)


def _falling(k: int) -> list[int]:
    """Coefficients (ascending in theta) of ``theta (theta-1) ... (theta-k+1)``."""
    c = [1]
    for i in range(k):
        nxt = [0] * (len(c) + 1)
        for j, a in enumerate(c):
            nxt[j + 1] += a
            nxt[j] -= i * a
        c = nxt
    return c


def operator_at_infinity(L: DiffOp) -> DiffOp:
    """``L`` rewritten in ``v = 1/w`` (so ``d/dw = -v^2 d/dv``), cleared."""
    v = Poly.x()
    D = DiffOp([Poly(), -(v * v)])
    top = max(c.degree for c in L.coeffs if not c.is_zero())
    out = DiffOp.zero()
    Dk = DiffOp([Poly.const(1)])
    for k, a in enumerate(L.coeffs):
        if k:
            Dk = Dk * D
        if a.is_zero():
            continue
        # a(1/v) * v^top
        out = out + DiffOp.mult(a.reverse(top)) * Dk
    return out.primitive()


# -- local forms ---------------------------------------------------------------
class LocalForm:
    """Taylor data of the coefficients at one point, with the theta form on demand."""

    def __init__(self, L: DiffOp, location):
        if L.order < 1:
            raise ValueError("operator order must be >= 1")
        if not L.is_polynomial():
            L = L.primitive()
        self.location = location
        self.order = L.order
        if isinstance(location, AlgebraicPoint):
            self.field = _Algebraic(location.min_poly)
            self._derivs = [[c if isinstance(c, Poly) else c.as_poly()] for c in L.coeffs]
            self._taylor = [[] for _ in L.coeffs]
        else:
            self.field = _Rationals()
            if location is INFINITY:
                local = operator_at_infinity(L)
            else:
                local = L.translate(location) if location != 0 else L
            self._taylor = [list(c.c) for c in local.coeffs]
            self._derivs = None
            self._degs = [c.degree if not c.is_zero() else -1 for c in local.coeffs]
        self._valuations = [self._valuation(k) for k in range(self.order + 1)]
        self.mu = min(v - k for k, v in enumerate(self._valuations) if v is not None)
        self.is_regular = self._valuations[self.order] - self.order == self.mu
        self._theta: list[list] = []

    def coeff(self, k: int, i: int):
        """``[x^i] a_k(x)`` in the local variable."""
        if self._derivs is None:
            t = self._taylor[k]
            return mpq(t[i]) if i < len(t) else mpq(0)
        t = self._taylor[k]
        ds = self._derivs[k]
        while len(t) <= i:
            j = len(t)
            while len(ds) <= j:
                ds.append(ds[-1].derivative() / len(ds))
            t.append(self.field.ring(ds[j]))
        return t[i]

    def _max_index(self, k: int):
        if self._derivs is None:
            return self._degs[k]
        return self._derivs[k][0].degree

    def _valuation(self, k: int):
        top = self._max_index(k)
        if not isinstance(top, int) or top < 0:
            return None
        for i in range(top + 1):
            if not self.field.is_zero(self.coeff(k, i)):
                return i
        return None

    @property
    def is_ordinary(self) -> bool:
        return self._valuations[self.order] == 0

    def theta_poly(self, j: int) -> list:
        """``P_j`` as ascending coefficients in theta (field elements)."""
        while len(self._theta) <= j:
            jj = len(self._theta)
            out = [self.field.zero] * (self.order + 1)
            for k in range(self.order + 1):
                i = jj + self.mu + k
                if i < 0 or self._valuations[k] is None:
                    continue
                a = self.coeff(k, i)
                if self.field.is_zero(a):
                    continue
                for t, f in enumerate(_falling(k)):
                    if f:
                        out[t] = out[t] + a * f
            self._theta.append(out)
        return self._theta[j]

    def indicial(self) -> list:
        return self.theta_poly(0)


def local_form(L: DiffOp, pt) -> LocalForm:
    return LocalForm(L, _as_location(pt))


# -- exponents ----------------------------------------------------------------------
def _poly_div_linear(coeffs: list, r, field) -> list:
    """Quotient of ``sum coeffs[i] t^i`` by ``(t - r)`` (remainder dropped)."""
    n = len(coeffs) - 1
    out = [field.zero] * n
    acc = field.zero
    for i in range(n, 0, -1):
        acc = acc * r + coeffs[i]
        out[i - 1] = acc
    return out


def _eval(coeffs: list, t, field):
    acc = field.zero
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _norm_poly(coeffs: list, field: _Algebraic) -> Poly:
    """``prod over conjugates`` of the polynomial, as a rational polynomial in t."""
    deg = (len(coeffs) - 1) * field.p.degree
    ts = list(range(deg + 1))
    vals = [resultant(field.p, _eval(coeffs, mpq(t), field).poly) for t in ts]
    return interpolate(ts, vals)


def _exponents(form: LocalForm):
    """``(exponents, residual)``; residual is None when all roots are rational."""
    if not form.is_regular:
        raise IrregularSingularity(form.location)
    P0 = list(form.indicial())
    field = form.field
    if isinstance(field, _Rationals):
        p = Poly(P0)
        roots = rational_roots(p)
        got = sum(m for _, m in roots)
        residual = None
        if got < p.degree:
            r = p
            for x, m in roots:
                r = r.exact_div(Poly([-x, 1]) ** m)
            residual = r.monic()
        return roots, residual
    lead = P0[-1]
    inv = field.inv(lead)
    P0 = [c * inv for c in P0]
    # common rational roots of all conjugates: gcd of the w-coordinate slices
    slices = []
    for t in range(field.p.degree):
        slices.append(Poly([c.poly[t] for c in P0]))
    G = gcd_many([s for s in slices if not s.is_zero()])
    roots = rational_roots(G) if G.degree > 0 else []
    R = P0
    for x, m in roots:
        for _ in range(m):
            R = _poly_div_linear(R, field.lift(x), field)
    if len(R) == 1:
        return roots, None
    # a rational root at only some conjugates shows up as a zero divisor
    for x, _ in rational_roots(_norm_poly(R, field)):
        field.is_zero(_eval(R, field.lift(x), field))
    return roots, R


def indicial_exponents(L: DiffOp, pt) -> list[tuple[mpq, int]]:
    """Rational roots of the indicial polynomial at ``pt``, with multiplicity.

    Raises ``UnresolvedExponents`` when some roots are irrational and
    ``DiscoveredFactor`` when an algebraic locus is not uniform.
    """
    form = local_form(L, pt)
    roots, residual = _exponents(form)
    if residual is not None:
        raise UnresolvedExponents(form.location, residual)
    return roots


def indicial_polynomial(L: DiffOp, pt):
    """``P_0(rho)`` as a Poly (rational points) or a list of residues."""
    form = local_form(L, pt)
    if not form.is_regular:
        raise IrregularSingularity(form.location)
    P0 = form.indicial()
    return Poly(P0) if isinstance(form.field, _Rationals) else P0


# -- singular points ---------------------------------------------------------------
def _split_locus(L: DiffOp, locus: AlgebraicPoint) -> list[AlgebraicPoint]:
    todo = [locus]
    done = []
    while todo:
        pt = todo.pop()
        try:
            _exponents(LocalForm(L, pt))
        except DiscoveredFactor as e:
            todo.append(AlgebraicPoint(e.factor))
            todo.append(AlgebraicPoint(e.cofactor))
            continue
        except (IrregularSingularity, UnresolvedExponents):
            pass
        done.append(pt)
    return sorted(done, key=location_key)


def singular_points(L: DiffOp) -> list:
    """Rational roots of the leading coefficient, algebraic loci for the rest, then infinity.

    Loci are split until the local exponents are the same at every root.
    """
    if L.order < 1:
        raise ValueError("operator order must be >= 1")
    if not L.is_polynomial():
        L = L.primitive()
    lead = L.leading
    pts: list = []
    for x, _ in rational_roots(lead):
        pts.append(x)
    rest = lead
    for x, m in rational_roots(lead):
        rest = rest.exact_div(Poly([-x, 1]) ** m)
    if rest.degree > 0:
        for f, _ in squarefree_split(rest):
            if f.degree > 0:
                pts.extend(_split_locus(L, AlgebraicPoint(f)))
    pts.sort(key=location_key)
    pts.append(INFINITY)
    return pts


def _point_count(pt) -> int:
    return pt.degree if isinstance(pt, AlgebraicPoint) else 1


@dataclass(frozen=True)
class FuchsianReport:
    is_fuchsian: bool
    relation_lhs: mpq | None
    relation_rhs: mpq
    finite_points: int
    irregular: tuple = ()

    @property
    def holds(self) -> bool:
        return self.is_fuchsian and self.relation_lhs == self.relation_rhs


def fuchsian_relation_rhs(m: int, q: int) -> mpq:
    """``(m-1) q (q-1) / 2`` for m finite singular points."""
    return mpq((m - 1) * q * (q - 1), 2)


def fuchsian_check(L: DiffOp) -> FuchsianReport:
    """Regularity at every singular point and the exponent-sum relation."""
    q = L.order
    pts = singular_points(L)
    finite = sum(_point_count(p) for p in pts if p is not INFINITY)
    total = mpq(0)
    irregular = []
    for pt in pts:
        try:
            ex = indicial_exponents(L, pt)
        except IrregularSingularity:
            irregular.append(pt)
            continue
        total += _point_count(pt) * sum(r * m for r, m in ex)
    rhs = fuchsian_relation_rhs(finite, q)
    if irregular:
        return FuchsianReport(False, None, rhs, finite, tuple(irregular))
    return FuchsianReport(True, total, rhs, finite)


# -- local solutions ---------------------------------------------------------------
def _taylor_at(coeffs: list, sigma, field) -> list:
    """``[P^(i)(sigma)/i!]_i`` by repeated synthetic division."""
    c = list(coeffs)
    out = []
    while c:
        acc = field.zero
        nxt = [field.zero] * (len(c) - 1)
        for i in range(len(c) - 1, -1, -1):
            acc = acc * sigma + c[i]
            if i:
                nxt[i - 1] = acc
        out.append(acc)
        c = nxt
    return out


@dataclass(frozen=True)
class LocalSolution:
    """``x^exponent * sum_l log(x)^l * series_l`` in the local variable.

    ``coefficients[l][n]`` is the coefficient of ``x^(exponent+n) log(x)^l``;
    entries are rationals, or residues at an algebraic locus.
    """

    exponent: mpq
    log_degree: int
    coefficients: tuple
    trunc: int

    def series(self, l: int = 0) -> Series:
        return Series(self.coefficients[l], len(self.coefficients[l]) - 1)


@dataclass
class _ClassSolver:
    """Frobenius recurrence for one exponent class ``rho0 + Z``."""

    form: LocalForm
    rho0: mpq
    roots: dict  # position -> multiplicity
    width: int = field(init=False)

    def __post_init__(self):
        self.width = sum(self.roots.values())
        self._shifted: dict = {}

    def shifted(self, j: int, n: int) -> list:
        """Taylor coefficients of ``P_j`` at ``rho0 + n``."""
        key = (j, n)
        if key not in self._shifted:
            f = self.form.field
            self._shifted[key] = _taylor_at(self.form.theta_poly(j), f.lift(self.rho0 + n), f)
        return self._shifted[key]

    def _apply(self, coeffs: list, vec: list) -> list:
        f = self.form.field
        m = self.width
        out = [f.zero] * m
        for l in range(m):
            acc = f.zero
            for i, b in enumerate(coeffs):
                if l + i >= m:
                    break
                if not f.is_zero(vec[l + i]) and not f.is_zero(b):
                    acc = acc + b * vec[l + i]
            out[l] = acc
        return out

    def _split(self, n: int):
        """``(r, U)`` with ``P_0(rho0+n+S) = S^r U``."""
        f = self.form.field
        alpha = self.shifted(0, n)
        r = 0
        while r < len(alpha) and f.is_zero(alpha[r]):
            r += 1
        if r != self.roots.get(n, 0):
            raise ArithmeticError("indicial multiplicity mismatch in recurrence")
        return r, alpha[r:]

    def _solve_u(self, U: list, v: list) -> list:
        f = self.form.field
        m = self.width
        inv = f.inv(U[0])
        c = [f.zero] * m
        for l in range(m - 1, -1, -1):
            acc = v[l]
            for i in range(1, len(U)):
                if l + i >= m:
                    break
                acc = acc - U[i] * c[l + i]
            c[l] = acc * inv
        return c

    def rhs(self, cs: list, n: int) -> list:
        f = self.form.field
        m = self.width
        acc = [f.zero] * m
        for j in range(1, n + 1):
            prev = cs[n - j]
            if all(f.is_zero(x) for x in prev):
                continue
            t = self._apply(self.shifted(j, n - j), prev)
            acc = [a - b for a, b in zip(acc, t)]
        return acc

    def solve(self, start: int, free_index: int, trunc: int) -> list:
        """Coefficient vectors for the generator with unit free parameter at ``start``."""
        f = self.form.field
        m = self.width
        cs = [[f.zero] * m for _ in range(start)]
        for n in range(start, trunc + 1):
            rhs = self.rhs(cs, n) if n > start else [f.zero] * m
            r, U = self._split(n)
            for l in range(m - r, m):
                if not f.is_zero(rhs[l]):
                    raise ArithmeticError("log degree bound exceeded")
            v = [f.zero] * m
            for l in range(r, m):
                v[l] = rhs[l - r]
            if n == start:
                # scaled so that the leading coefficient of the solution is 1
                v[free_index] = U[0]
            cs.append(self._solve_u(U, v))
        return cs

    def free_params(self, cs: list) -> list:
        """Free coordinates of a solution given by its coefficient vectors."""
        f = self.form.field
        out = []
        for n in sorted(self.roots):
            r, U = self._split(n)
            Uc = self._apply(U, cs[n])
            inv = f.inv(U[0])
            out.extend(x * inv for x in Uc[:r])
        return out


def _classes(exponents: list) -> list[tuple[mpq, dict]]:
    groups: dict = {}
    for rho, mult in exponents:
        key = rho - math.floor(rho)
        groups.setdefault(key, []).append((rho, mult))
    out = []
    for key in sorted(groups):
        items = sorted(groups[key])
        rho0 = items[0][0]
        out.append((rho0, {int(r - rho0): m for r, m in items}))
    return out


def default_trunc(L: DiffOp, exponents: list) -> int:
    """``2q`` plus the largest integer gap between exponents plus 5."""
    gap = 0
    for rho0, roots in _classes(exponents):
        gap = max(gap, max(roots))
    return 2 * L.order + gap + 5


def _to_solution(solver: _ClassSolver, cs: list, start: int, trunc: int) -> LocalSolution:
    f = solver.form.field
    m = solver.width
    top = 0
    for vec in cs:
        for l in range(m):
            if not f.is_zero(vec[l]):
                top = max(top, l)
    coeffs = []
    for l in range(top + 1):
        scale = mpq(1, math.factorial(l))
        coeffs.append(tuple(cs[n][l] * scale for n in range(start, trunc + 1)))
    return LocalSolution(solver.rho0 + start, top, tuple(coeffs), trunc - start)


def _basis(form: LocalForm, exponents: list, trunc: int):
    out = []
    for rho0, roots in _classes(exponents):
        solver = _ClassSolver(form, rho0, roots)
        if trunc < max(roots):
            raise ValueError("truncation below the exponent gap")
        for start in sorted(roots):
            for i in range(roots[start]):
                cs = solver.solve(start, i, trunc)
                out.append((solver, cs, start))
    return out


def verify_local_solution(form: LocalForm, sol: LocalSolution) -> bool:
    """Substitute into ``sum a_k(x) d^k`` directly (not via the theta form)."""
    f = form.field
    terms: dict = {}
    for l, row in enumerate(sol.coefficients):
        for n, c in enumerate(row):
            if not f.is_zero(c):
                terms[(n, l)] = c
    N = sol.trunc
    q = form.order
    acc: dict = {}
    der = terms
    for k in range(q + 1):
        if k:
            nxt: dict = {}
            for (n, l), c in der.items():
                e = sol.exponent + n - (k - 1)
                if e != 0:
                    key = (n, l)
                    nxt[key] = nxt.get(key, f.zero) + c * e
                if l:
                    key = (n, l - 1)
                    nxt[key] = nxt.get(key, f.zero) + c * l
            der = nxt
        # der holds d^k y with exponent index n meaning x^(exponent + n - k)
        v = form._valuations[k]
        if v is None:
            continue
        for i in range(v, min(N + form.mu + k, form._max_index(k)) + 1):
            a = form.coeff(k, i)
            if f.is_zero(a):
                continue
            for (n, l), c in der.items():
                idx = n - k + i
                if idx > N + form.mu:
                    continue
                acc[(idx, l)] = acc.get((idx, l), f.zero) + a * c
    return all(f.is_zero(c) for c in acc.values())


def local_basis(L: DiffOp, pt, trunc: int | None = None, verify: bool = True) -> list[LocalSolution]:
    """A full basis of formal solutions at ``pt``, known through ``x^(exponent+trunc)``.

    The default truncation is ``2q + largest integer exponent gap + 5``.
    Each solution is checked by substitution unless ``verify`` is False.
    """
    form = local_form(L, pt)
    exponents, residual = _exponents(form)
    if residual is not None:
        raise UnresolvedExponents(form.location, residual)
    if trunc is None:
        trunc = default_trunc(L, exponents)
    sols = []
    for solver, cs, start in _basis(form, exponents, trunc):
        sol = _to_solution(solver, cs, start, trunc)
        if verify and not verify_local_solution(form, sol):
            raise ArithmeticError(f"local solution at {form.location} failed substitution")
        sols.append(sol)
    return sols


def _log_depth(form: LocalForm, exponents: list) -> int:
    trunc = max(max(r) for _, r in _classes(exponents))
    depth = 0
    for solver, cs, start in _basis(form, exponents, trunc):
        depth = max(depth, _to_solution(solver, cs, start, trunc).log_degree)
    return depth


def is_apparent(L: DiffOp, pt) -> bool:
    """True at a root of the leading coefficient where all local solutions are analytic."""
    form = local_form(L, pt)
    if form.is_ordinary or not form.is_regular or form.location is INFINITY:
        return False
    exponents, residual = _exponents(form)
    if residual is not None:
        return False
    if any(m != 1 or r < 0 or r.denominator != 1 for r, m in exponents):
        return False
    return _log_depth(form, exponents) == 0


# -- monodromy ----------------------------------------------------------------------
@dataclass(frozen=True)
class MonodromyStructure:
    """``classes``: (exponent class in [0,1), Jordan block sizes) per eigenvalue."""

    location: object
    classes: tuple
    determinant: int | None
    nilpotency: int

    @property
    def blocks(self) -> tuple:
        return tuple(sorted((b for _, bs in self.classes for b in bs), reverse=True))

    @property
    def is_identity(self) -> bool:
        return all(c == 0 and all(b == 1 for b in bs) for c, bs in self.classes)

    @property
    def is_unipotent(self) -> bool:
        return all(c == 0 for c, _ in self.classes)


def _rank(rows: list, field) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if not field.is_zero(rows[i][col]):
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        for i in range(rank + 1, len(rows)):
            if field.is_zero(rows[i][col]):
                continue
            fct = rows[i][col] * inv
            rows[i] = [a - fct * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _matmul(a: list, b: list, field) -> list:
    n = len(a)
    out = [[field.zero] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            if field.is_zero(a[i][k]):
                continue
            for j in range(n):
                out[i][j] = out[i][j] + a[i][k] * b[k][j]
    return out


def _jordan_blocks(Nmat: list, field) -> list[int]:
    n = len(Nmat)
    ranks = [n]
    P = Nmat
    while ranks[-1] > 0:
        ranks.append(_rank(P, field))
        if ranks[-1] == ranks[-2]:
            raise ArithmeticError("log-shift operator is not nilpotent")
        P = _matmul(P, Nmat, field)
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    blocks = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        blocks.extend([k] * exact)
    return blocks


def formal_monodromy(L: DiffOp, pt, trunc: int | None = None) -> MonodromyStructure:
    """Exponent classes, Jordan blocks of the log shift, and the determinant sign.

    Going once around the point multiplies ``x^rho`` by ``exp(2 pi i rho)`` and
    shifts ``log x`` by ``2 pi i``; on a class the second part is ``exp(2 pi i S)``
    with S the log-shift, so the Jordan type is that of S.
    """
    form = local_form(L, pt)
    exponents, residual = _exponents(form)
    if residual is not None:
        raise UnresolvedExponents(form.location, residual)
    f = form.field
    classes = []
    for rho0, roots in _classes(exponents):
        solver = _ClassSolver(form, rho0, roots)
        top = max(roots) if trunc is None else max(trunc, max(roots))
        basis = []
        for start in sorted(roots):
            for i in range(roots[start]):
                basis.append(solver.solve(start, i, top))
        # matrix of S in this basis: columns are free params of S(y)
        cols = []
        for cs in basis:
            shifted = [vec[1:] + [f.zero] for vec in cs]
            cols.append(solver.free_params(shifted))
        n = len(basis)
        Smat = [[cols[j][i] for j in range(n)] for i in range(n)]
        blocks = tuple(sorted(_jordan_blocks(Smat, f), reverse=True))
        classes.append((rho0 - math.floor(rho0), blocks))
    det = None
    if all((2 * r).denominator == 1 for r, _ in exponents):
        halves = sum(m for r, m in exponents if r.denominator == 2)
        det = -1 if halves % 2 else 1
    nil = max(max(bs) for _, bs in classes)
    return MonodromyStructure(form.location, tuple(classes), det, nil)


def minimal_polynomial_relation(ms: MonodromyStructure) -> Poly:
    """``(x^K - 1)^b``: K the common denominator of the classes, b the largest block.

    Every power of the local monodromy satisfies it; for a unipotent point
    this is ``(x-1)^b``, and with integer and half-integer classes it is
    ``(x^2-1)^b``.
    """
    K = reduce(math.lcm, (int(c.denominator) for c, _ in ms.classes), 1)
    return (Poly.monomial(K) - 1) ** ms.nilpotency


# -- rational solutions -------------------------------------------------------------
def _int_exponents(L: DiffOp, pt) -> list[int]:
    ex, _ = _exponents(local_form(L, pt))
    return [int(r) for r, _ in ex if r.denominator == 1]


def cleared_composition(L: DiffOp, den: Poly) -> DiffOp:
    """``den^(q+1) * L * (1/den)`` as an operator with polynomial coefficients.

    Uses ``(1/den)^(j) = E_j / den^(j+1)`` with ``E_0 = 1`` and
    ``E_(j+1) = E_j' den - (j+1) E_j den'``, so no rational-function
    arithmetic is involved.
    """
    q = L.order
    dden = den.derivative()
    E = [Poly.const(1)]
    for j in range(q):
        E.append(E[j].derivative() * den - E[j] * dden * (j + 1))
    dpow = [Poly.const(1)]
    for _ in range(q):
        dpow.append(dpow[-1] * den)
    out = []
    for i in range(q + 1):
        acc = Poly()
        for k in range(i, q + 1):
            a = L[k]
            if not a.is_zero():
                acc = acc + a * E[k - i] * dpow[q - k + i] * math.comb(k, i)
        out.append(acc)
    return DiffOp(out)


def rational_solutions(L: DiffOp) -> list[RatFunc]:
    """Basis of the rational-function solutions of L.

    The denominator is bounded by the smallest integer exponent at each
    finite singular point, the numerator degree by the exponents at
    infinity; what remains is a linear system for the numerator.
    """
    from .exactalg import kernel_basis, modular_kernel_basis

    if not L.is_polynomial():
        L = L.primitive()
    den = Poly.const(1)
    for pt in singular_points(L):
        if pt is INFINITY:
            continue
        ints = _int_exponents(L, pt)
        if not ints:
            return []
        low = min(ints)
        if low < 0:
            f = pt.min_poly if isinstance(pt, AlgebraicPoint) else Poly([-pt, 1])
            den = den * f ** (-low)
    at_inf = _int_exponents(L, INFINITY)
    if not at_inf:
        return []
    bound = den.degree - min(at_inf)
    if bound < 0:
        return []
    M = cleared_composition(L, den)
    cols = []
    for j in range(bound + 1):
        acc = Poly()
        for k, a in enumerate(M.coeffs):
            if k > j or a.is_zero():
                continue
            acc = acc + a * Poly.monomial(j - k, math.perm(j, k))
        cols.append(acc)
    height = max((c.degree for c in cols if not c.is_zero()), default=-1) + 1
    if height == 0:
        ker = [[mpq(int(i == j)) for j in range(bound + 1)] for i in range(bound + 1)]
    else:
        rows = [[c[i] for c in cols] for i in range(height)]
        rows = [r for r in rows if any(x != 0 for x in r)]
        ker = modular_kernel_basis(rows) if len(cols) > 80 else kernel_basis(rows)
    out = []
    for vec in ker:
        num = Poly(vec).primitive()
        if not M.apply_poly(num).is_zero():
            raise ArithmeticError("rational solution failed verification")
        out.append(RatFunc(num, den))
    return out


# -- reports -----------------------------------------------------------------------
@dataclass(frozen=True)
class SingularPointReport:
    location: object
    exponents: tuple
    is_regular: bool
    is_apparent: bool
    log_depth: int
    monodromy: MonodromyStructure | None = None
    unresolved: object = None


def _report_one(L: DiffOp, pt, with_monodromy: bool) -> SingularPointReport:
    form = local_form(L, pt)
    if not form.is_regular:
        return SingularPointReport(form.location, (), False, False, 0)
    exponents, residual = _exponents(form)
    if residual is not None:
        return SingularPointReport(form.location, tuple(exponents), True, False, 0, None, residual)
    depth = _log_depth(form, exponents)
    apparent = (
        pt is not INFINITY
        and not form.is_ordinary
        and depth == 0
        and all(m == 1 and r >= 0 and r.denominator == 1 for r, m in exponents)
    )
    mono = formal_monodromy(L, pt) if with_monodromy else None
    return SingularPointReport(form.location, tuple(exponents), True, apparent, depth, mono)


def analyze(L: DiffOp, with_monodromy: bool = True) -> list[SingularPointReport]:
    """One report per singular point (including infinity), splitting loci as needed."""
    if not L.is_polynomial():
        L = L.primitive()
    todo = list(reversed(singular_points(L)))
    out = []
    while todo:
        pt = todo.pop()
        try:
            out.append(_report_one(L, pt, with_monodromy))
        except DiscoveredFactor as e:
            todo.append(AlgebraicPoint(e.factor))
            todo.append(AlgebraicPoint(e.cofactor))
    out.sort(key=lambda r: location_key(r.location))
    return out


def _fmt_exponents(exps) -> str:
    parts = []
    for r, m in sorted(exps, key=lambda rm: rm[0], reverse=True):
        parts.extend([str(r)] * m)
    return ", ".join(parts)


def format_report(reports: Sequence[SingularPointReport], fuchs: FuchsianReport | None = None) -> str:
    lines = []
    for r in reports:
        loc = r.location
        if isinstance(loc, AlgebraicPoint):
            where = f"{loc.min_poly} = 0  ({loc.degree} roots)"
        elif loc is INFINITY:
            where = "infinity"
        else:
            where = f"w = {loc}"
        lines.append(f"point: {where}")
        if not r.is_regular:
            lines.append("  irregular")
            continue
        lines.append(f"  exponents: {_fmt_exponents(r.exponents)}")
        if r.unresolved is not None:
            lines.append(f"  unresolved indicial factor: {r.unresolved}")
            continue
        lines.append(f"  apparent: {'yes' if r.is_apparent else 'no'}")
        lines.append(f"  log depth: {r.log_depth}")
        if r.monodromy is not None:
            ms = r.monodromy
            for c, bs in ms.classes:
                lines.append(f"  class {c}: blocks {list(bs)}")
            if ms.determinant is not None:
                lines.append(f"  determinant: {ms.determinant:+d}")
    if fuchs is not None:
        if fuchs.is_fuchsian:
            lines.append(
                f"fuchsian relation: sum of exponents {fuchs.relation_lhs}, "
                f"(m-1)q(q-1)/2 = {fuchs.relation_rhs} with m = {fuchs.finite_points}: "
                + ("holds" if fuchs.holds else "FAILS")
            )
        else:
            lines.append("not fuchsian: irregular points present")
    return "\n".join(lines) + "\n"


__all__ = [
    "FuchsianReport",
    "IrregularSingularity",
    "LocalForm",
    "LocalSolution",
    "MonodromyStructure",
    "SingularPointReport",
    "UnresolvedExponents",
    "analyze",
    "default_trunc",
    "format_report",
    "formal_monodromy",
    "fuchsian_check",
    "fuchsian_relation_rhs",
    "indicial_exponents",
    "indicial_polynomial",
    "is_apparent",
    "local_basis",
    "local_form",
    "minimal_polynomial_relation",
    "operator_at_infinity",
    "rational_solutions",
    "singular_points",
    "verify_local_solution",
]
