from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jetstress.forms import FormField, exterior_derivative, omit
from jetstress.geometry import (
    QuadratureRule,
    Region,
    boundary_faces,
    integrate_face_form,
    integrate_top_form,
    make_box_region,
)
from jetstress.scalars import PolyField, random_poly


def random_form(seed, n, p, degree):
    rng = np.random.default_rng(seed)
    from itertools import combinations
    return FormField(n, p, {c: random_poly(int(rng.integers(2**31)), n, degree) for c in combinations(range(n), p)})


def test_region_validation():
    with pytest.raises(ValueError):
        make_box_region(2, [[0, 1]])
    with pytest.raises(ValueError):
        make_box_region(1, [[1, 0]])
    with pytest.raises(ValueError):
        Region(((0.0, 1.0),), orientation=2)


def test_face_signs():
    faces = boundary_faces(make_box_region(3, [[0, 1]] * 3))
    assert [(f.axis, f.side, f.induced_sign) for f in faces] == [
        (0, "lo", -1), (0, "hi", 1), (1, "lo", 1), (1, "hi", -1), (2, "lo", -1), (2, "hi", 1)]


def test_face_chart_and_ambient_points():
    face = boundary_faces(make_box_region(3, [[0, 1], [2, 3], [4, 5]]))[3]
    assert face.chart.bounds == ((0, 1), (4, 5))
    assert face.tangential_axes == (0, 2)
    assert face.to_ambient(np.array([[0.5, 4.5]])).tolist() == [[0.5, 3.0, 4.5]]
    assert face.flipped().induced_sign == -face.induced_sign


@pytest.mark.parametrize("n", [2, 3, 4])
def test_every_edge_is_shared_by_two_faces_with_opposite_signs(n):
    region = make_box_region(n, [[0, 1]] * n)
    signs = Counter()
    count = Counter()
    for face in boundary_faces(region):
        for edge in face.edges:
            signs[edge.key] += edge.sign
            count[edge.key] += 1
    assert len(count) == 2 * n * (n - 1)
    assert set(count.values()) == {2}
    assert set(signs.values()) == {0}


def test_one_dimensional_faces_have_no_edges():
    with pytest.raises(ValueError):
        boundary_faces(make_box_region(1, [[0, 1]]))[0].edges


@pytest.mark.parametrize("order", [1, 3, 5, 8])
def test_quadrature_exactness_boundary(order):
    rule = QuadratureRule(order)
    region = make_box_region(1, [[0, 2]])
    pts, wts = rule.box(region)
    top = rule.exactness
    assert np.dot(wts, pts[:, 0] ** top) == pytest.approx(2 ** (top + 1) / (top + 1), rel=1e-13)
    # one degree higher is no longer integrated exactly
    assert abs(np.dot(wts, pts[:, 0] ** (top + 1)) - 2 ** (top + 2) / (top + 2)) > 1e-10


def test_quadrature_tensor_product_weights_sum_to_volume():
    region = make_box_region(3, [[-1, 2], [0, 0.5], [1, 4]])
    _, wts = QuadratureRule(4).box(region)
    assert wts.sum() == pytest.approx(region.volume, rel=1e-14)


def test_orientation_flips_integrals():
    f = PolyField.monomial((1, 1), 1.0)
    omega = FormField(2, 2, {(0, 1): f})
    pos = Region(((0.0, 1.0), (0.0, 2.0)))
    neg = Region(((0.0, 1.0), (0.0, 2.0)), orientation=-1)
    assert integrate_top_form(omega, pos) == pytest.approx(1.0)
    assert integrate_top_form(omega, neg) == pytest.approx(-1.0)


def test_unit_square_flux_oracle():
    # omega = x dy: int over boundary = area of the square
    omega = FormField(2, 1, {(1,): PolyField.coordinate(2, 0)})
    region = make_box_region(2, [[0, 1], [0, 1]])
    assert sum(integrate_face_form(omega, f) for f in boundary_faces(region)) == pytest.approx(1.0, abs=1e-15)


def _stokes(seed, n, degree, bounds):
    region = make_box_region(n, bounds)
    omega = random_form(seed, n, n - 1, degree)
    lhs = integrate_top_form(exterior_derivative(omega), region)
    rhs = sum(integrate_face_form(omega, f) for f in boundary_faces(region))
    return lhs, rhs


@pytest.mark.parametrize("n", [1, 2, 3, 4])
@pytest.mark.parametrize("seed", range(5))
def test_stokes_on_boxes(n, seed):
    bounds = [[-0.5 + 0.1 * i, 1.0 + 0.2 * i] for i in range(n)]
    lhs, rhs = _stokes(seed, n, 6, bounds)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(2, 3),
       st.lists(st.tuples(st.floats(-2, 0), st.floats(0.1, 2)), min_size=3, max_size=3))
def test_stokes_property(seed, n, boxes):
    lhs, rhs = _stokes(seed, n, 4, [[lo, lo + w] for lo, w in boxes[:n]])
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))


def test_omit_helper():
    assert omit(3, 1) == (0, 2)
