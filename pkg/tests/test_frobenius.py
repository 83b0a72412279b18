import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import L1, PF
from holonomy.diffop import DiffOp, RatFunc
from holonomy.exactalg import INFINITY, AlgebraicPoint, Poly, Series, xgcd
from holonomy.frobenius import (
    cleared_composition,
    IrregularSingularity,
    analyze,
    format_report,
    formal_monodromy,
    fuchsian_check,
    fuchsian_relation_rhs,
    indicial_exponents,
    indicial_polynomial,
    is_apparent,
    local_basis,
    local_form,
    minimal_polynomial_relation,
    rational_solutions,
    singular_points,
    verify_local_solution,
)

w = Poly.x()
APPARENT = DiffOp([0, 0, -1, w])  # w d^3 - d^2, solutions 1, w, w^3
THETA2 = DiffOp([0, w, w * w])  # theta^2, solutions 1 and log w
P1 = 1 + 3 * w + 4 * w * w


def ex(L, pt):
    return sorted((r, m) for r, m in indicial_exponents(L, pt))


def test_apparent_example():
    assert singular_points(APPARENT) == [mpq(0), INFINITY]
    assert ex(APPARENT, 0) == [(0, 1), (1, 1), (3, 1)]
    assert is_apparent(APPARENT, 0)
    sols = local_basis(APPARENT, 0)
    assert sorted(s.exponent for s in sols) == [0, 1, 3]
    assert all(s.log_degree == 0 for s in sols)


def test_is_apparent_false_at_ordinary_points_and_infinity():
    assert not is_apparent(APPARENT, 5)
    assert not is_apparent(APPARENT, INFINITY)


def test_picard_fuchs_exponents():
    assert singular_points(PF) == [mpq(0), mpq(1), INFINITY]
    assert ex(PF, 0) == [(mpq(-1, 6), 1), (mpq(1, 6), 1)]
    assert ex(PF, 1) == [(mpq(1, 4), 1), (mpq(3, 4), 1)]
    assert ex(PF, INFINITY) == [(0, 2)]
    rep = {r.location: r for r in analyze(PF)}
    assert rep[INFINITY].log_depth == 1
    assert rep[mpq(0)].log_depth == 0
    fc = fuchsian_check(PF)
    assert fc.holds and fc.relation_lhs == 1 == fc.relation_rhs


def test_indicial_polynomial_at_zero():
    # 144 rho(rho-1) - 4 after removing the common factor
    P = indicial_polynomial(PF, 0)
    roots = [mpq(-1, 6), mpq(1, 6)]
    assert all(sum(c * r**i for i, c in enumerate(P)) == 0 for r in roots)


def test_log_solution():
    sols = local_basis(THETA2, 0)
    assert sorted(s.log_degree for s in sols) == [0, 1]
    ms = formal_monodromy(THETA2, 0)
    assert ms.blocks == (2,) and ms.is_unipotent and not ms.is_identity
    assert minimal_polynomial_relation(ms) == (w - 1) ** 2


def test_half_integer_monodromy():
    L = DiffOp([0, 1, 2 * w])  # exponents 0, 1/2
    ms = formal_monodromy(L, 0)
    assert ms.determinant == -1
    assert minimal_polynomial_relation(ms) == w**2 - 1


def test_irregular_point():
    L = DiffOp([-1, w * w])
    with pytest.raises(IrregularSingularity):
        indicial_exponents(L, 0)
    fc = fuchsian_check(L)
    assert not fc.is_fuchsian and fc.irregular == (mpq(0),)


def test_algebraic_locus():
    L = DiffOp([0, -(3 + 8 * w), P1])  # solutions 1 and the integral of P1
    pt = AlgebraicPoint(P1)
    assert singular_points(L) == [pt, INFINITY]
    assert ex(L, pt) == [(0, 1), (2, 1)]
    assert is_apparent(L, pt)
    assert formal_monodromy(L, pt).is_identity


def test_algebraic_locus_splits_by_exponents():
    p2 = 1 + w * w
    _, s, t = xgcd(P1, p2)
    u = (2 * s * P1 + t * p2) % (P1 * p2)  # 1 on P1, 2 on p2
    a2 = P1 * p2
    L = DiffOp([0, -(a2.derivative() * u), a2])
    reps = analyze(L)
    locs = {r.location for r in reps}
    assert AlgebraicPoint(P1) in locs and AlgebraicPoint(p2) in locs
    by = {r.location: sorted(r.exponents) for r in reps}
    assert by[AlgebraicPoint(P1)] == [(0, 1), (2, 1)]
    assert by[AlgebraicPoint(p2)] == [(0, 1), (3, 1)]
    # the coefficient u grows too fast for infinity to be regular
    assert fuchsian_check(L).irregular == (INFINITY,)
    text = format_report(reps, fuchsian_check(L))
    assert "1 + 3*w + 4*w^2" in text


def test_rational_solutions():
    A = DiffOp([Poly.const(3), w]) * L1
    sols = rational_solutions(A)
    # S1 = w/(1-4w), and the preimage of w^-3 under L1
    assert len(sols) == 2
    assert all(A.apply_ratfunc(r).is_zero() for r in sols)
    ratios = [r / RatFunc(w, 1 - 4 * w) for r in sols]
    assert any(q.num.degree == 0 and q.den.degree == 0 for q in ratios)
    assert rational_solutions(APPARENT) and len(rational_solutions(APPARENT)) == 3


def test_fuchsian_relation_closed_form():
    assert fuchsian_relation_rhs(35, 7) == 714
    assert fuchsian_relation_rhs(2, 2) == 1


# -- properties ------------------------------------------------------------------
roots = st.sampled_from([mpq(0), mpq(1), mpq(-1), mpq(1, 2), mpq(-1, 4), mpq(3)])


@st.composite
def fuchsian_first_order(draw):
    rs = draw(st.lists(roots, min_size=1, max_size=2, unique=True))
    f = Poly.from_roots(rs)
    # residues at the roots are g(r)/f'(r): rational by construction
    g = Poly([draw(st.integers(-3, 3)) for _ in range(len(rs))])
    return DiffOp([-g, f])


@settings(max_examples=40)
@given(st.lists(fuchsian_first_order(), min_size=1, max_size=3))
def test_fuchsian_relation_on_products(factors):
    L = factors[0]
    for F in factors[1:]:
        L = L * F
    L = L.primitive()
    fc = fuchsian_check(L)
    assert fc.is_fuchsian
    assert fc.relation_lhs == fc.relation_rhs


@settings(max_examples=30)
@given(st.lists(fuchsian_first_order(), min_size=2, max_size=3))
def test_local_solutions_substitute_to_zero(factors):
    L = factors[0]
    for F in factors[1:]:
        L = L * F
    L = L.primitive()
    for pt in singular_points(L):
        if pt is INFINITY:
            continue
        form = local_form(L, pt)
        sols = local_basis(L, pt, verify=False)
        assert len(sols) == L.order
        assert all(verify_local_solution(form, s) for s in sols)


@settings(max_examples=30)
@given(st.lists(fuchsian_first_order(), min_size=2, max_size=3))
def test_jordan_blocks_partition_the_order(factors):
    L = factors[0]
    for F in factors[1:]:
        L = L * F
    L = L.primitive()
    for pt in singular_points(L):
        ms = formal_monodromy(L, pt)
        assert sum(ms.blocks) == L.order
        rep = [r for r in analyze(L, with_monodromy=False) if r.location == ms.location][0]
        assert ms.nilpotency == rep.log_depth + 1


def test_local_solution_series_view():
    sol = [s for s in local_basis(APPARENT, 0) if s.exponent == 3][0]
    assert isinstance(sol.series(), Series)
    assert sol.series()[0] == 1


@settings(max_examples=40)
@given(st.lists(fuchsian_first_order(), min_size=1, max_size=3), st.lists(roots, min_size=1, max_size=3))
def test_cleared_composition_matches_rational_route(factors, den_roots):
    L = factors[0]
    for F in factors[1:]:
        L = L * F
    den = Poly.from_roots(den_roots)
    fast = cleared_composition(L, den)
    slow = L * DiffOp.mult(RatFunc(Poly.const(1), den))
    scale = RatFunc.lift(den ** (L.order + 1))
    assert all(RatFunc.lift(a) == scale * RatFunc.lift(b) for a, b in zip(fast.coeffs, slow.coeffs))
    assert fast.order == slow.order
