import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import N1, PF, pf_series_at, s2_series
from holonomy.diffop import DiffOp, apply, logderiv_of_product, first_order_from_solution
from holonomy.exactalg import Poly, Series
from holonomy.guesser import GuessConfig, InsufficientData, SurplusFailure, guess_ode, verify_surplus

w = Poly.x()


def geometric(N):
    return Series([1] * (N + 1), N)


def test_geometric_series():
    r = guess_ode(geometric(29))
    assert r.operator.same_up_to_content(DiffOp([Poly.const(-1), 1 - w]))
    assert r.order == 1 and r.degrees == (1, 0)
    assert r.surplus_verified == 29 - r.used_through >= 10


def test_s2_gives_n1():
    r = guess_ode(s2_series(29))
    assert r.operator.same_up_to_content(N1)


def test_picard_fuchs_from_ordinary_point():
    f = pf_series_at(-1, 59)
    r = guess_ode(f, GuessConfig(max_order=3))
    assert r.order == 2
    assert r.operator.translate(1).same_up_to_content(PF)


def test_explicit_degree_list():
    r = guess_ode(s2_series(29), GuessConfig(degrees=[3, 2]))
    assert r.operator.same_up_to_content(N1)
    assert r.degrees == (3, 2)


def test_explicit_list_too_long_for_series():
    with pytest.raises(InsufficientData):
        guess_ode(s2_series(15), GuessConfig(degrees=[8, 8, 8]))


def test_no_operator_in_schedule():
    # arbitrary rationals: no small ansatz fits
    junk = Series([mpq(k * k * k % 17 - 8, k % 5 + 1) for k in range(30)], 29)
    assert guess_ode(junk, GuessConfig(max_order=2, degrees=3)) is None


def test_insufficient_data():
    with pytest.raises(InsufficientData):
        guess_ode(geometric(5))


def test_min_surplus_validation():
    with pytest.raises(ValueError):
        GuessConfig(min_surplus=0)


def test_verify_surplus_detects_corruption():
    f = geometric(29)
    L = DiffOp([Poly.const(-1), 1 - w])
    assert verify_surplus(L, f, 10) == 19
    bad = Series(list(f)[:25] + [2] + list(f)[26:], 29)
    with pytest.raises(SurplusFailure) as exc:
        verify_surplus(L, bad, 10)
    assert exc.value.index == 25


@settings(max_examples=10)
@given(st.sampled_from([2, 3, -2, mpq(1, 2), mpq(-3, 4)]))
def test_scaling_covariance(c):
    """Guessing on f(c w) gives the operator of f with w -> c w and d -> d / c."""
    c = mpq(c)
    f = s2_series(29)
    g = Series([f[n] * c**n for n in range(30)], 29)
    L = guess_ode(g).operator
    want = DiffOp([a.scale_arg(c) / c**k for k, a in enumerate(N1.coeffs)])
    assert L.same_up_to_content(want)


@settings(max_examples=15)
@given(
    st.lists(
        st.tuples(st.sampled_from([-3, -2, -1, 1, 2, 3]), st.sampled_from([mpq(-1, 2), mpq(1, 2), mpq(-1), mpq(3, 2)])),
        min_size=1,
        max_size=2,
        unique_by=lambda t: t[0],
    )
)
def test_hyperexponential_products_recovered(factors):
    facs = [(1 + a * w, e) for a, e in factors]
    N = 30
    f = Series([1], N)
    for p, e in facs:
        f = f * Series.from_poly(p, N).power(e)
    r = guess_ode(f, GuessConfig(max_order=1))
    assert r is not None
    assert r.operator.same_up_to_content(first_order_from_solution(logderiv_of_product(facs)))
    assert apply(r.operator, f).truncate(N - 1).valuation() is None
