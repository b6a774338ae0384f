import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from jetstress.jets import (
    IteratedDualPoint,
    IteratedJetPoint,
    JetPoint,
    SecondOrderDual,
    enumerate_sym,
    include_second,
    iterate_prolong,
    jet_section,
    lift_dual,
    pair_iterated,
    pair_second,
    project,
    prolong,
    prolong_field,
    restrict_dual,
    sym_slot,
)
from jetstress.scalars import PolyField, random_poly

x1, x2 = PolyField.coordinate(2, 0), PolyField.coordinate(2, 1)


def test_enumerate_sym():
    assert enumerate_sym(2, 2) == [(0, 0), (0, 1), (1, 1)]
    assert enumerate_sym(4, 0) == [()]
    assert enumerate_sym(3, 1) == [(0,), (1,), (2,)]
    assert len(enumerate_sym(4, 3)) == 20
    assert sym_slot(3, (2, 0)) == sym_slot(3, (0, 2))
    with pytest.raises(ValueError):
        enumerate_sym(0, 1)


def test_prolong_quadratic():
    A = prolong([x1 * x1], 2, [1.0, 0.0])
    assert A.components[0].tolist() == [[1.0]]
    assert A.components[1].tolist() == [[2.0, 0.0]]
    assert A.components[2].tolist() == [[2.0, 0.0, 0.0]]


def test_prolong_linear_and_constant():
    A = prolong([x2], 1, [0.3, 0.7])
    assert A.get(0, 0) == pytest.approx(0.7)
    assert A.components[1].tolist() == [[0.0, 1.0]]
    C = prolong([PolyField.constant(2, 4.0)], 3, [0.1, 0.2])
    assert all(not block.any() for block in C.components[1:])


def test_project_truncates():
    A = prolong([x1 * x2], 2, [0.5, 0.5])
    assert project(A, 1).order == 1
    with pytest.raises(ValueError):
        project(A, 3)


def test_iterate_prolong_holonomic():
    B = iterate_prolong(prolong_field([x1 * x1], 1), [1.0, 0.0])
    assert B.B0.tolist() == [1.0]
    assert B.B1.tolist() == [[2.0, 0.0]] == B.B2.tolist()
    assert B.B3.tolist() == [[[2.0, 0.0], [0.0, 0.0]]]
    assert B.is_holonomic()


def test_iterate_prolong_nonholonomic():
    z = PolyField.zero(2)
    A = jet_section([z], [[x2, z]])
    B = iterate_prolong(A, [0.4, 0.9])
    assert B.B2.tolist() == [[0.0, 0.0]]
    assert B.B1.tolist() == [[0.9, 0.0]]
    assert B.B3[0, 0, 1] == 1.0 and B.B3[0, 1, 0] == 0.0
    assert not B.is_holonomic()


def test_include_second_matches_iterated_prolongation():
    u = [random_poly(3, 2, 4), random_poly(4, 2, 3)]
    pt = [0.2, -0.6]
    B = include_second(prolong(u, 2, pt))
    C = iterate_prolong(prolong_field(u, 1), pt)
    for a, b in zip((B.B0, B.B1, B.B2, B.B3), (C.B0, C.B1, C.B2, C.B3)):
        assert np.allclose(a, b, atol=1e-14)


def test_restrict_dual_examples():
    d, n = 1, 2
    X3 = np.zeros((d, n, n))
    X3[0, 0, 1], X3[0, 1, 0] = 1.0, -1.0
    X = IteratedDualPoint(np.zeros(d), np.zeros((d, n)), np.zeros((d, n)), X3)
    assert not restrict_dual(X).S2.any()

    X1 = np.zeros((d, n)); X1[0, 0] = 2.0
    X2 = np.zeros((d, n)); X2[0, 0] = 3.0
    S = restrict_dual(IteratedDualPoint(np.zeros(d), X1, X2, np.zeros((d, n, n))))
    assert S.S1[0, 0] == 5.0


def test_lift_dual_halves_off_diagonal():
    S2 = np.zeros((1, 3)); S2[0, 1] = 2.0
    X = lift_dual(SecondOrderDual(np.zeros(1), np.zeros((1, 2)), S2))
    assert X.X3[0, 0, 1] == X.X3[0, 1, 0] == 1.0
    assert not X.X1.any()


def test_include_rejects_wrong_order():
    with pytest.raises(ValueError):
        include_second(JetPoint.zeros(2, 1, 1))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adjunction_random_trials(n):
    rng = np.random.default_rng(100 + n)
    worst = 0.0
    for _ in range(250):
        d = int(rng.integers(1, 3))
        X = IteratedDualPoint.random(rng, n, d)
        A = JetPoint.random(rng, n, d, 2)
        worst = max(worst, abs(pair_second(restrict_dual(X), A) - pair_iterated(X, include_second(A))))
    assert worst <= 1e-14


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 4), st.integers(1, 3))
def test_lift_then_restrict_is_identity(seed, n, d):
    S = SecondOrderDual.random(np.random.default_rng(seed), n, d)
    back = restrict_dual(lift_dual(S))
    assert np.array_equal(back.S0, S.S0)
    assert np.array_equal(back.S1, S.S1)
    assert np.max(np.abs(back.S2 - S.S2)) <= 1e-15


def test_restrict_is_not_injective():
    rng = np.random.default_rng(0)
    X = IteratedDualPoint.random(rng, 3, 1)
    shift = rng.uniform(-1, 1, (1, 3))
    anti = X.X3.copy(); anti[0, 0, 1] += 1.0; anti[0, 1, 0] -= 1.0
    Y = IteratedDualPoint(X.X0, X.X1 + shift, X.X2 - shift, anti)
    a, b = restrict_dual(X), restrict_dual(Y)
    assert np.allclose(a.S1, b.S1) and np.allclose(a.S2, b.S2)
    B = IteratedJetPoint.random(rng, 3, 1)
    assert abs(pair_iterated(X, B) - pair_iterated(Y, B)) > 1e-6
