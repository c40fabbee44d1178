from math import comb
import random

import pytest

from gaugebrane.cech import (
    TotalComplex,
    bott_dim,
    euler_characteristic_closed_form,
    hypercohomology,
    line_bundle_cohomology,
    truncation_bound,
)
from gaugebrane.complexes import BraneComplex, direct_sum, line_bundle, omega_replacement, shift, twist
from gaugebrane.poly import HomogeneousPoly, monomial_basis

from conftest import brane_suite


def brute_force_h(n, m, q):
    """Count monomials: q = 0 non-negative exponents, q = n all exponents <= -1."""
    if q == 0:
        return len(monomial_basis(n, m))
    if q == n:
        # substitute e_i = -1 - f_i with f_i >= 0
        return len(monomial_basis(n, -m - n - 1))
    return 0


def test_truncation_bound_examples():
    assert truncation_bound(line_bundle(2, 0)) == 4
    assert truncation_bound(line_bundle(1, -3)) == 6


def test_closed_form_examples():
    assert line_bundle_cohomology(2, 3, 0) == 10
    assert line_bundle_cohomology(2, -4, 2) == 3
    assert all(line_bundle_cohomology(2, -1, q) == 0 for q in range(3))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_closed_form_matches_monomial_count(n):
    for m in range(-10, 10):
        for q in range(n + 1):
            assert line_bundle_cohomology(n, m, q) == brute_force_h(n, m, q)


def test_bott_examples():
    assert bott_dim(2, 1, 0, 1) == 1
    assert bott_dim(1, 1, 2, 0) == 1
    assert bott_dim(2, 1, 0, 0) == 0
    assert bott_dim(2, 1, 2, 0) == 3


def test_bott_small_cases_by_hand():
    # Omega^1 on P^1 is O(-2)
    for k in range(-6, 7):
        for q in (0, 1):
            assert bott_dim(1, 1, k, q) == line_bundle_cohomology(1, k - 2, q)
    # Omega^n = O(-n-1)
    for n in (2, 3):
        for k in range(-6, 7):
            for q in range(n + 1):
                assert bott_dim(n, n, k, q) == line_bundle_cohomology(n, k - n - 1, q)
    # Hodge numbers
    for n in (1, 2, 3):
        for p in range(n + 1):
            for q in range(n + 1):
                assert bott_dim(n, p, 0, q) == int(p == q)


def test_bott_euler_sequence_characteristic():
    # chi(Omega^1(k)) = (n+1) chi(O(k-1)) - chi(O(k))
    for n in (1, 2, 3):
        for k in range(-5, 6):
            chi = sum((-1) ** q * bott_dim(n, 1, k, q) for q in range(n + 1))
            assert chi == (n + 1) * _chi_line(n, k - 1) - _chi_line(n, k)


def _chi_line(n, m):
    return sum((-1) ** q * line_bundle_cohomology(n, m, q) for q in range(n + 1))


def test_hypercohomology_examples():
    for n in (1, 2, 3):
        assert hypercohomology(line_bundle(n, 0)).nonzero() == {0: 1}
    x0 = HomogeneousPoly.variable(3, 0)
    hyperplane = BraneComplex(2, {-1: (-1,), 0: (0,)}, {-1: [[x0]]})
    assert hypercohomology(hyperplane).nonzero() == {0: 1}
    # H^1(O(-2)) sits in total degree 0 once the term moves to position -1
    rep = hypercohomology(shift(line_bundle(1, -2), 1), representatives=True)
    assert rep.nonzero() == {0: 1}
    assert len(rep.representatives[0]) == 1


def test_truncation_below_bound_rejected():
    with pytest.raises(ValueError):
        TotalComplex(line_bundle(2, 0), M=3)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_line_bundles_engine(n):
    for m in range(-n - 4, 5):
        dims = hypercohomology(line_bundle(n, m)).dims
        for q in range(n + 1):
            assert dims.get(q, 0) == line_bundle_cohomology(n, m, q)


def test_truncation_stability():
    for n, c in brane_suite(12):
        a = hypercohomology(c)
        b = hypercohomology(c, a.truncation + 2)
        assert a.nonzero() == b.nonzero()


def test_serre_duality_line_bundles():
    for n in (1, 2, 3):
        for m in range(-6, 5):
            for q in range(n + 1):
                assert hypercohomology(line_bundle(n, m))[q] == \
                    hypercohomology(line_bundle(n, -m - n - 1))[n - q]


def test_euler_characteristic_identity():
    for n, c in brane_suite(16):
        assert hypercohomology(c).euler_characteristic() == euler_characteristic_closed_form(c)


def test_shift_moves_degrees():
    for n, c in brane_suite(8):
        base = hypercohomology(c).nonzero()
        for l in (-1, 1, 2):
            moved = hypercohomology(shift(c, l)).nonzero()
            assert moved == {i - l: v for i, v in base.items()}


def test_direct_sum_additive():
    rng = random.Random(5)
    suite = brane_suite(10)
    for n, a in suite:
        b = brane_suite(1, ns=(n,), depths=(rng.randint(1, 2),), salt=rng.randrange(50))[0][1]
        s = hypercohomology(direct_sum(a, b))
        ha, hb = hypercohomology(a), hypercohomology(b)
        for i in set(s.dims) | set(ha.dims) | set(hb.dims):
            assert s[i] == ha[i] + hb[i]


def test_omega_engine_matches_bott_small():
    for n in (1, 2):
        for p in range(1, n + 1):
            for k in range(-3, 4):
                rep = hypercohomology(omega_replacement(line_bundle(n, k), p))
                for q in range(n + 1):
                    assert rep[q] == bott_dim(n, p, k, q)


def test_twisted_sheaf_on_twist():
    # twisting the structure sheaf of a hyperplane by k gives H^0 = C(k+n-1, n-1) for k >= 0
    n = 2
    x0 = HomogeneousPoly.variable(3, 0)
    hyperplane = BraneComplex(n, {-1: (-1,), 0: (0,)}, {-1: [[x0]]})
    for k in range(0, 4):
        assert hypercohomology(twist(hyperplane, k)).nonzero() == {0: comb(k + n - 1, n - 1)}
