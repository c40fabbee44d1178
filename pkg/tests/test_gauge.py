from fractions import Fraction
import random

import pytest

from gaugebrane.complexes import (
    BraneComplex,
    ChainMap,
    cone,
    direct_sum,
    line_bundle,
    random_brane,
    random_trivial_brane,
    shift,
    zero_complex,
)
from gaugebrane.gauge import (
    GaugeProblem,
    atiyah_cocycle,
    canonical_gauge_field,
    classify_brane,
    dlog,
    euler_contraction,
    first_chern,
    frame_derivative,
    gauge_exists,
)
from gaugebrane.linalg import Matrix, rank
from gaugebrane.poly import HomogeneousPoly, LaurentPoly

from conftest import brane_suite


def O(n, k=0, pos=0):
    return line_bundle(n, k, pos)


def point_p1():
    x0 = HomogeneousPoly.variable(2, 0)
    return BraneComplex(1, {-1: (-1,), 0: (0,)}, {-1: [[x0]]})


def test_dlog_differences_are_basic():
    for nv in (2, 3, 4):
        for a in range(nv):
            assert euler_contraction(dlog(nv, a)) == LaurentPoly.constant(nv, 1)
            for b in range(nv):
                diff = tuple(u - v for u, v in zip(dlog(nv, a), dlog(nv, b)))
                assert euler_contraction(diff).is_zero()


def test_cocycle_of_structure_sheaf_is_zero():
    assert atiyah_cocycle(O(2)).is_zero()


@pytest.mark.parametrize("k", [-2, -1, 1, 3])
def test_cocycle_of_line_bundle(k):
    cyc = atiyah_cocycle(O(1, k))
    (f,) = cyc.alpha[(0, 1)][0][0]
    expected = tuple(k * a - k * b for a, b in zip(dlog(2, 1), dlog(2, 0)))
    assert f == expected
    assert all(not m for per in cyc.beta.values() for m in per.values())
    assert not cyc.is_zero()


def test_cocycle_beta_of_point():
    cyc = atiyah_cocycle(point_p1())
    # x0 / x0 is constant on chart 0, x0 / x1 is not on chart 1
    assert all(f.is_zero() for f in cyc.beta[0][-1][0][0])
    assert not all(f.is_zero() for f in cyc.beta[1][-1][0][0])


def test_frame_derivative_matches_quotient_rule():
    x = [HomogeneousPoly.variable(3, l) for l in range(3)]
    h = x[0] * x[1]
    f = frame_derivative(h, 2)
    # x2^2 d(x0 x1 / x2^2), one component per partial derivative
    framed = LaurentPoly(3, {(1, 1, -2): 1}, 0)
    frame = LaurentPoly(3, {(0, 0, 2): 1}, 2)
    assert f == tuple(frame * framed.derivative(m) for m in range(3))
    assert euler_contraction(f).is_zero()


def test_cocycle_closes_on_random_suite():
    for n, g in brane_suite(60, ns=(1, 2, 3), salt=40):
        cyc = atiyah_cocycle(g)
        assert cyc.closure_defects() == []
        assert cyc.euler_violations() == []


@pytest.mark.parametrize("n", [1, 2])
def test_line_bundles(n):
    for k in range(-n, n + 1):
        dec = gauge_exists(O(n, k))
        assert dec.exists == (k == 0)
        if k == 0:
            assert dec.space_dim == 0 and dec.count == 1


def test_zero_complex():
    dec = gauge_exists(zero_complex(2))
    assert dec.exists and dec.space_dim == 0


def test_witness_verifies_and_projects_to_identity():
    for seed in range(6):
        g = random_trivial_brane(2, seed)
        dec = gauge_exists(g)
        assert dec.exists
        w = dec.witness
        assert w.verifies()
        assert not any(w.residual())
        for p, m in w.projection.items():
            assert m == Matrix.identity(len(g.terms[p]))


def test_direct_sum_is_and():
    rng = random.Random(4)
    suite = brane_suite(10, salt=60) + [(2, random_trivial_brane(2, s)) for s in range(4)]
    for n, a in suite:
        b = random_trivial_brane(n, rng.randrange(100)) if rng.random() < 0.5 else random_brane(n, 1, rng.randrange(100))
        expected = gauge_exists(a).exists and gauge_exists(b).exists
        assert gauge_exists(direct_sum(a, b)).exists == expected


def _class_dimension(model, vectors):
    """Dimension of the span of ``vectors`` modulo the image of D_{-1}."""
    d_in = model.differential(-1)
    cols = {}
    for c in range(d_in.cols):
        for r, row in enumerate([d_in.row(r) for r in range(d_in.rows)]):
            if c in row:
                cols.setdefault(c, {})[r] = row[c]
    base = [{r: v for r, v in col.items()} for col in cols.values()]
    extra = [{i: v for i, v in enumerate(vec) if v} for vec in vectors]
    as_rows = lambda vs: Matrix(len(vs), model.dim(0), {i: v for i, v in enumerate(vs) if v})
    return rank(as_rows(base + extra)) - rank(as_rows(base))


def test_affine_structure():
    cases = [direct_sum(O(2), shift(O(2), 1)), random_trivial_brane(2, 3), O(1)]
    for g in cases:
        prob = GaugeProblem(g)
        x1 = prob.solve()
        x2 = prob.solve(column_order=list(reversed(range(prob.model.dim(0)))))
        assert x1 is not None and x2 is not None
        assert not any(prob.residual(x2))
        diff = [a - b for a, b in zip(x1, x2)]
        assert not any(prob.model.differential(0).apply(diff))
        space_dim = gauge_exists(g).space_dim
        assert _class_dimension(prob.model, [diff]) <= space_dim


def test_all_zero_single_position_unique():
    for r in (1, 2, 3):
        g = BraneComplex(2, {0: (0,) * r})
        dec = gauge_exists(g)
        assert dec.exists and dec.space_dim == 0


def test_canonical_field_examples():
    for g in [O(2), BraneComplex(2, {0: (0, 0, 0)}), BraneComplex(1, {0: (0, 0), 1: (0,)}, {0: [[1, 0]]})]:
        w = canonical_gauge_field(g)
        assert w.verifies()
        assert all(v == 0 for v in w.primitive)
        for m in w.connection_forms().values():
            assert all(all(f.is_zero() for f in sec) for row in m for sec in row)


def test_canonical_field_preconditions():
    with pytest.raises(ValueError):
        canonical_gauge_field(O(2, -1))
    x0 = HomogeneousPoly.variable(3, 0)
    with pytest.raises(ValueError):
        canonical_gauge_field(BraneComplex(2, {-1: (-1,), 0: (0,)}, {-1: [[x0]]}))


def test_first_chern():
    assert first_chern((0, 0, 0)) == 0
    assert first_chern((-1, 0)) == -1
    assert first_chern((-2, 2)) == 0


def test_classify_examples():
    c = classify_brane(O(2, -1))
    assert (c.predicted, c.engine, c.agree) == (False, False, True)
    c = classify_brane(random_trivial_brane(2, 1))
    assert (c.predicted, c.engine, c.agree) == (True, True, True)
    c = classify_brane(point_p1())
    assert c.predicted is False
    assert c.engine is False
    c = classify_brane(O(2, 1))
    assert c.predicted is None and c.agree is None


def test_connection_forms_shape():
    prob = GaugeProblem(O(1, 0))
    forms = prob.connection_forms(prob.solve())
    assert set(forms) == {(0, 0), (1, 0)}
