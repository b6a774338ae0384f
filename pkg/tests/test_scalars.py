import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jetstress.geometry import make_box_region
from jetstress.scalars import (
    BlackBoxField,
    PolyField,
    fd_partial,
    linear_combination,
    poly_integrate_box,
    poly_partial,
    random_poly,
)

x, y = PolyField.coordinate(2, 0), PolyField.coordinate(2, 1)


def test_poly_arithmetic_and_eval():
    f = x * x * y - 3 * y + 2
    assert f.degree == 3
    assert f([2.0, 1.0]) == pytest.approx(4 - 3 + 2)
    assert f(np.array([[0.0, 0.0], [1.0, 2.0]])).tolist() == pytest.approx([2.0, 2 - 6 + 2])
    assert (f - f).is_zero()


def test_diff_and_partial():
    f = PolyField(2, {(3, 2): 2.0, (1, 0): 5.0})
    assert f.diff(0) == PolyField(2, {(2, 2): 6.0, (0, 0): 5.0})
    assert poly_partial(f, (2, 1)) == PolyField(2, {(1, 1): 24.0})
    assert f.partial((4, 0)).is_zero()


def test_restrict():
    f = PolyField(3, {(1, 2, 1): 1.0, (0, 0, 1): -1.0})
    g = f.restrict(1, 2.0)
    assert g.dim == 2
    assert g == PolyField(2, {(1, 1): 4.0, (0, 1): -1.0})


def test_json_roundtrip():
    f = random_poly(3, 3, 2)
    assert PolyField.from_json(3, f.to_json()) == f


def test_from_json_rejects_wrong_arity():
    with pytest.raises(ValueError):
        PolyField.from_json(2, [{"exponents": [1, 0, 0], "coeff": 1.0}])


def test_integrate_box_exact():
    # int_0^1 int_0^1 x^2 y = 1/6; over [-1, 2] x [0, 3]: 3 * 9/2
    assert poly_integrate_box(x * x * y, make_box_region(2, [[0, 1], [0, 1]])) == pytest.approx(1 / 6, abs=1e-15)
    assert poly_integrate_box(x * x * y, make_box_region(2, [[-1, 2], [0, 3]])) == pytest.approx(13.5, abs=1e-13)


def test_random_poly_is_seeded():
    assert random_poly(5, 2, 3) == random_poly(5, 2, 3)
    assert random_poly(5, 2, 3) != random_poly(6, 2, 3)
    assert random_poly(5, 2, 3).degree <= 3


def test_linear_combination_collects_polys():
    out = linear_combination([(2.0, x), (-2.0, x), (1.0, y)])
    assert isinstance(out, PolyField)
    assert out == y


@pytest.mark.parametrize("index, tol", [((1, 0), 1e-8), ((0, 1), 1e-8), ((2, 0), 1e-6), ((1, 1), 1e-6),
                                        ((2, 1), 1e-5)])
def test_blackbox_matches_exact_partials(index, tol):
    f = random_poly(11, 2, 4)
    bb = BlackBoxField.wrap(f)
    pts = np.random.default_rng(0).uniform(-1, 1, (20, 2))
    exact = f.partial(index)(pts)
    approx = bb.partial(index)(pts)
    assert np.max(np.abs(exact - approx)) < tol


def test_blackbox_products_use_leibniz():
    f, g = random_poly(1, 2, 3), random_poly(2, 2, 3)
    h = BlackBoxField.wrap(f) * BlackBoxField.wrap(g)
    pt = np.array([0.3, -0.2])
    assert h.diff(0).diff(1)(pt) == pytest.approx((f * g).diff(0).diff(1)(pt), abs=1e-6)


def test_blackbox_restrict():
    f = random_poly(4, 3, 3)
    bb = BlackBoxField.wrap(f).restrict(2, 0.5)
    pt = np.array([0.1, 0.7])
    assert bb.diff(1)(pt) == pytest.approx(f.restrict(2, 0.5).diff(1)(pt), abs=1e-8)


def test_fd_partial_and_domain_check():
    region = make_box_region(1, [[0, 1]])
    bb = BlackBoxField(1, lambda p: np.sin(p[:, 0]), domain=region)
    assert fd_partial(bb, 0, [0.5]) == pytest.approx(np.cos(0.5), abs=1e-9)
    with pytest.raises(ValueError):
        bb.diff(0)([0.0])


def test_fd_step_must_be_positive():
    with pytest.raises(ValueError):
        BlackBoxField(1, lambda p: p[:, 0], fd_step=0.0)


coeffs = st.floats(-2, 2, allow_nan=False)
small_poly = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), coeffs, max_size=5).map(
    lambda t: PolyField(2, t))


@settings(max_examples=60, deadline=None)
@given(small_poly, small_poly, st.integers(0, 1))
def test_product_rule(f, g, axis):
    lhs = (f * g).diff(axis)
    rhs = f.diff(axis) * g + f * g.diff(axis)
    pts = np.array([[0.3, -0.7], [1.1, 0.4]])
    assert np.allclose(lhs(pts), rhs(pts), atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(small_poly)
def test_mixed_partials_commute(f):
    assert f.diff(0).diff(1) == f.diff(1).diff(0)
