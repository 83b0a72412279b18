import os
import subprocess
import sys

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from holonomy.exactalg import INFINITY, AlgebraicPoint, Poly, Series
from holonomy.lattice import (
    chi3_angular,
    chi3_series,
    expand_x_tilde,
    expand_y_tilde,
    modular_invariant,
    nickel_singularities,
    w_of_s,
)
from holonomy.lattice.angular import x_identity_residual, y_identity_residual
from holonomy.lattice.backend import compiled
from holonomy.lattice.cache import CacheError, ResidueStore, format_series, parse_series, read_series, write_series
from holonomy.lattice.chi3 import primes_for_order, residues_mod_prime
from holonomy.lattice.quadrature import chi3_quadrature, series_partial_sum

w = Poly.x()

# w^17..w^22 of chi3/8, produced once by the angular expansion route and frozen
ANGULAR_17_22 = [357391, 153484, 6556516, 3440964, 116449960, 71553656]


def test_w_of_s():
    assert w_of_s(mpq(1)) == mpq(1, 4)
    assert w_of_s(mpq(-1)) == mpq(-1, 4)
    assert abs(w_of_s(0.5) - 0.2) < 1e-15


def test_xy_expansions_satisfy_their_identities():
    x = expand_x_tilde(12)
    y = expand_y_tilde(12)
    assert x_identity_residual(x).valuation() is None
    assert y_identity_residual(y).valuation() is None


def test_angular_route_matches_grid_route():
    a = chi3_angular(16)
    assert a == chi3_series(16).series


def test_grid_route_matches_frozen_angular_values():
    assert chi3_series(22).coefficients()[17:] == ANGULAR_17_22


def test_low_order_rejected():
    with pytest.raises(ValueError):
        chi3_series(8)


@pytest.mark.skipif(compiled is None, reason="compiled kernel not built")
def test_backends_agree():
    for N in (12, 25):
        p = primes_for_order(N)[0]
        assert residues_mod_prime(N, p, "compiled") == residues_mod_prime(N, p, "python")


def test_thread_count_does_not_change_result():
    assert chi3_series(30, threads=1).series == chi3_series(30, threads=4).series


def test_resumable_store(tmp_path):
    store = ResidueStore(tmp_path)
    full = chi3_series(20, store=store)
    assert len(store.load(20)) == len(primes_for_order(20))
    calls = []
    again = chi3_series(20, store=store, progress=lambda k, n: calls.append(k))
    assert again == full and calls


def test_corrupt_checkpoint_rejected(tmp_path):
    store = ResidueStore(tmp_path)
    chi3_series(12, store=store)
    f = next((tmp_path / "chi3_N12").glob("*.res"))
    f.write_text(f.read_text().replace(" 1 ", " 2 ", 1) + "x")
    with pytest.raises(CacheError):
        store.load(12)


def test_cache_roundtrip_and_integrity(tmp_path):
    s = chi3_series(16).series
    text = format_series(s)
    assert "9 1\n" in text and "16 6084\n" in text
    assert "\n1 0\n" not in text  # leading zeros omitted
    back, header = parse_series(text)
    assert back == s and header["order"] == "16"
    with pytest.raises(CacheError):
        parse_series(text.replace("16 6084", "16 6085"))
    p = tmp_path / "c.txt"
    write_series(p, s)
    assert read_series(p)[0] == s


def test_quadrature_matches_series():
    coeffs = chi3_series(49).coefficients()
    for x in (0.02, 0.05):
        q = chi3_quadrature(x, rel_tol=1e-12)
        assert abs(q - series_partial_sum(coeffs, x)) <= 1e-9 * abs(q)


def test_modular_invariant_landmarks():
    assert modular_invariant(mpq(-1, 2)) == mpq(32, 81)
    assert modular_invariant(mpq(1)) == mpq(-1, 25920)
    for pt in (mpq(0), mpq(1, 4), mpq(-1, 4)):
        assert modular_invariant(pt) is INFINITY
    assert modular_invariant(AlgebraicPoint(1 + 3 * w + 4 * w * w)) == mpq(-125, 64)


def test_modular_invariant_rejects_nonconstant_locus():
    with pytest.raises(ValueError):
        modular_invariant(AlgebraicPoint(w * w - w - 1))


def test_nickel_singularities():
    assert set(nickel_singularities(1)) == {mpq(1), mpq(-1, 2)}
    locs = nickel_singularities(2)
    assert any(isinstance(p, AlgebraicPoint) for p in locs)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=10))
def test_modular_invariant_symmetric_in_w(x):
    x = mpq(x)
    assert modular_invariant(x) == modular_invariant(-x) or modular_invariant(x) is INFINITY


def test_partial_sum_small_w():
    s = Series([0, 1, 2], 2)
    assert series_partial_sum(s, 0.5) == pytest.approx(1.0)


def test_pure_fallback_selected_by_environment():
    code = "from holonomy.lattice import BACKEND, chi3_series; print(BACKEND, chi3_series(16).coefficients()[-1])"
    env = dict(os.environ, HOLONOMY_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout
    assert out.split() == ["python", "6084"]
