"""Variational, traction, higher-order and non-holonomic stresses.

Everything is built on one object, :class:`Stress`: a field of linear maps
``J^1 W -> Lambda^p T*S`` given by p-form coefficients ``R[a]`` (pairing with
the value ``w^a``) and ``S[a][i]`` (pairing with the derivative ``w^a_{,i}``).
A first-order variational stress has ``p = n``; a traction stress is a
zeroth-order object (empty ``S``) with ``p = n - 1``; divergences and body
forces are zeroth-order with ``p = n``.

A non-holonomic stress is the same first-order machinery over the fiber
``W = J^1 U``, whose components are flattened as ``[u^0 .. u^{d-1},
u^0_{,0} .. u^0_{,n-1}, u^1_{,0}, ...]`` (see :func:`jet_fiber_index`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .forms import (
    FormField,
    basis_form,
    exterior_derivative,
    form_sum,
    interior_product,
    omit,
    pullback_to_face,
    top_form,
    wedge,
)
from .jets import (
    IteratedDualPoint,
    IteratedJetPoint,
    JetField,
    JetPoint,
    _sym,
    pair_iterated,
    prolong_field,
    sym_slot,
    to_exponents,
)
from .scalars import PolyField, ScalarField, field_sum


@dataclass(frozen=True)
class Stress:
    R: tuple[FormField, ...]
    S: tuple[tuple[FormField, ...], ...] = ()

    def __post_init__(self):
        if not self.R:
            raise ValueError("a stress needs at least one fiber component")
        shape = (self.R[0].dim, self.R[0].degree)
        forms = list(self.R) + [f for row in self.S for f in row]
        if any((f.dim, f.degree) != shape for f in forms):
            raise ValueError("all stress components must be forms of the same dim and degree")
        if self.S:
            if len(self.S) != len(self.R) or len({len(row) for row in self.S}) != 1:
                raise ValueError("S must have shape (fiber_dim, jet_dim)")

    @property
    def fiber_dim(self) -> int:
        return len(self.R)

    @property
    def dim(self) -> int:
        return self.R[0].dim

    @property
    def degree(self) -> int:
        return self.R[0].degree

    @property
    def jet_dim(self) -> int:
        return len(self.S[0]) if self.S else 0

    @property
    def is_zeroth_order(self) -> bool:
        return not self.S

    def act(self, section: JetField | Sequence[ScalarField]) -> FormField:
        """The form ``sum_a R_a w^a + sum_{a,i} S^i_a w^a_{,i}``.

        ``section`` is a jet field (its order-0 and order-1 blocks are used), or,
        for zeroth-order stresses, just the value fields ``w^a``.
        """
        if isinstance(section, JetField):
            values = [section.value(a) for a in range(section.d)]
        else:
            values = list(section)
        if len(values) != self.fiber_dim:
            raise ValueError(f"section has {len(values)} components, stress fiber has {self.fiber_dim}")
        terms = [self.R[a] * values[a] for a in range(self.fiber_dim)]
        if self.S:
            if not isinstance(section, JetField) or section.order < 1:
                raise ValueError("a first-order stress acts on jets, not on bare sections")
            if section.n != self.jet_dim:
                raise ValueError(f"jet has {section.n} axes, stress expects {self.jet_dim}")
            terms += [self.S[a][i] * section.first(a, i)
                      for a in range(self.fiber_dim) for i in range(self.jet_dim)]
        return form_sum(terms, self.dim, self.degree)

    def __neg__(self):
        return Stress(tuple(-f for f in self.R), tuple(tuple(-f for f in row) for row in self.S))

    def __add__(self, other):
        if not isinstance(other, Stress):
            return NotImplemented
        R = tuple(a + b for a, b in zip(self.R, other.R, strict=True))
        if not self.S and not other.S:
            return Stress(R)
        zero = FormField(self.dim, self.degree)
        m = max(self.jet_dim, other.jet_dim)
        mine = self.S or tuple((zero,) * m for _ in self.R)
        theirs = other.S or tuple((zero,) * m for _ in self.R)
        S = tuple(tuple(a + b for a, b in zip(r1, r2, strict=True)) for r1, r2 in zip(mine, theirs))
        return Stress(R, S)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        return Stress(tuple(f * c for f in self.R), tuple(tuple(f * c for f in row) for row in self.S))

    __rmul__ = __mul__

    def restrict(self, face) -> Stress:
        """Pull every component form back to a face chart; jet axes stay ambient."""
        return Stress(tuple(pullback_to_face(f, face) for f in self.R),
                      tuple(tuple(pullback_to_face(f, face) for f in row) for row in self.S))


# ---------------------------------------------------------------------------
# first order


def variational_stress(R: Sequence[ScalarField], S: Sequence[Sequence[ScalarField]]) -> Stress:
    """Top-degree stress from coefficient fields ``R[a]`` and ``S[a][i]``."""
    n = R[0].dim
    if len(S) != len(R) or any(len(row) != n for row in S):
        raise ValueError("S must have shape (d, n)")
    return Stress(tuple(top_form(r) for r in R), tuple(tuple(top_form(s) for s in row) for row in S))


def traction_stress(sigma: Sequence[Sequence[ScalarField]]) -> Stress:
    """Traction stress from ``sigma[a][k]``, the coefficient of the form omitting dx^k."""
    n = sigma[0][0].dim
    return Stress(tuple(
        FormField(n, n - 1, {omit(n, k): row[k] for k in range(n)}) for row in sigma
    ))


def stress_coefficients(stress: Stress) -> tuple[list[ScalarField], list[list[ScalarField]]]:
    """Scalar coefficients ``(R[a], S[a][i])`` of a top-degree stress."""
    if stress.degree != stress.dim:
        raise ValueError("coefficients are defined for top-degree stresses")
    return ([f.coefficient for f in stress.R], [[f.coefficient for f in row] for row in stress.S])


def eval_stress(stress: Stress, A: JetPoint, point) -> float:
    """Coefficient of ``S(A) dx^1 ^ ... ^ dx^n`` for a jet A at ``point``."""
    if stress.degree != stress.dim or stress.is_zeroth_order:
        raise ValueError("eval_stress needs a first-order variational stress")
    if (A.n, A.d) != (stress.jet_dim, stress.fiber_dim) or A.order < 1:
        raise ValueError("jet shape does not match the stress")
    R, S = stress_coefficients(stress)
    total = 0.0
    for a in range(stress.fiber_dim):
        total += R[a](point) * A.components[0][a, 0]
        for i in range(stress.jet_dim):
            total += S[a][i](point) * A.components[1][a, i]
    return float(total)


@dataclass(frozen=True)
class Symbol:
    """Restriction of a variational stress to vertical jets, ``L(T S, W) -> Lambda^n``."""

    S: tuple[tuple[ScalarField, ...], ...]

    def apply(self, A1: np.ndarray, point) -> float:
        A1 = np.asarray(A1, dtype=float)
        return float(sum(self.S[a][i](point) * A1[a, i]
                         for a in range(A1.shape[0]) for i in range(A1.shape[1])))


def vertical_symbol(stress: Stress) -> Symbol:
    _, S = stress_coefficients(stress)
    return Symbol(tuple(tuple(row) for row in S))


def traction(stress: Stress, axes: Sequence[int] | None = None) -> Stress:
    """``p_sigma``: contract the derivative part ``S^i`` with ``d/dx^i``.

    ``axes`` limits the contraction to some derivative directions; the default
    uses all jet axes.
    """
    if stress.is_zeroth_order:
        raise ValueError("traction of a zeroth-order stress")
    if stress.degree < 1:
        raise ValueError("cannot contract a 0-form valued stress")
    if stress.jet_dim != stress.dim:
        raise ValueError("ambient contraction needs jet axes equal to the chart axes")
    axes = range(stress.dim) if axes is None else axes
    return Stress(tuple(
        form_sum([interior_product(i, row[i]) for i in axes], stress.dim, stress.degree - 1)
        for row in stress.S
    ))


def _divergence_with(stress: Stress, sigma: Sequence[FormField], coframe: Sequence[FormField]) -> Stress:
    # div S(w) = d(sigma(w)) - S(j^1 w)
    #          = (d sigma_a - R_a) w^a + (dx^j ^ sigma_a - S^j_a) w^a_{,j}
    R = tuple(exterior_derivative(sigma[a]) - stress.R[a] for a in range(stress.fiber_dim))
    if stress.is_zeroth_order:
        return Stress(R)
    S = tuple(
        tuple(wedge(coframe[j], sigma[a]) - stress.S[a][j] for j in range(stress.jet_dim))
        for a in range(stress.fiber_dim)
    )
    if all(f.is_zero() for row in S for f in row):
        return Stress(R)
    return Stress(R, S)


def divergence(stress: Stress) -> Stress:
    """Generalized divergence ``d(p_sigma(S)(w)) - S(j^1 w)`` as a stress.

    For a top-degree first-order stress the result is zeroth order with
    coefficient ``S^k_{a,k} - R_a`` on ``w^a``.  For lower degrees (for example
    Z, the traction of a non-holonomic stress) the derivative part of the
    result need not vanish and is kept.
    """
    n = stress.dim
    if stress.is_zeroth_order:
        return -stress
    if stress.degree == n:
        R, S = stress_coefficients(stress)
        return Stress(tuple(
            top_form(field_sum([S[a][k].diff(k) for k in range(n)], n) - R[a])
            for a in range(stress.fiber_dim)
        ))
    return _divergence_with(stress, traction(stress).R, [basis_form(n, j) for j in range(n)])


def body_force(stress: Stress) -> Stress:
    return -divergence(stress)


def surface_force(sigma: Stress, face, w: Sequence[ScalarField]) -> FormField:
    """``t_P(w)``: the traction form pulled back to a face."""
    return pullback_to_face(sigma.act(w), face)


def divergence_terms(stress: Stress, w: Sequence[ScalarField], point) -> tuple[float, float, float]:
    """Pointwise ``(d(sigma(w)), S(j^1 w), div S(w))`` top-degree coefficients."""
    sigma_w = traction(stress).act(w)
    d_sigma_w = exterior_derivative(sigma_w).coefficient(point)
    power = stress.act(prolong_field(w, 1)).coefficient(point)
    div = divergence(stress).act(w).coefficient(point)
    return d_sigma_w, power, div


def divergence_residual(stress: Stress, w: Sequence[ScalarField], point) -> float:
    d_sigma_w, power, div = divergence_terms(stress, w, point)
    return abs(d_sigma_w - power - div)


# ---------------------------------------------------------------------------
# k-th order


@dataclass(frozen=True)
class HighOrderStress:
    """k-th order stress; ``components[p][a][slot]`` pairs with ``A^{p a}_I`` (no weights)."""

    components: tuple[tuple[tuple[ScalarField, ...], ...], ...]

    @property
    def order(self) -> int:
        return len(self.components) - 1

    @property
    def d(self) -> int:
        return len(self.components[0])

    @property
    def n(self) -> int:
        return self.components[0][0][0].dim

    @property
    def S0(self):
        return tuple(row[0] for row in self.components[0])

    @property
    def S1(self):
        return self.components[1]

    @property
    def S2(self):
        return self.components[2]

    def power(self, section: Sequence[ScalarField]) -> FormField:
        """``S(j^k u)`` as a top form."""
        n = self.n
        terms = [
            self.components[p][a][s] * section[a].partial(to_exponents(n, idx))
            for p in range(self.order + 1)
            for a in range(self.d)
            for s, idx in enumerate(_sym(n, p))
        ]
        return top_form(field_sum(terms, n))


def second_order_stress(S0, S1, S2) -> HighOrderStress:
    n = S0[0].dim
    nsym = len(_sym(n, 2))
    if any(len(row) != n for row in S1) or any(len(row) != nsym for row in S2):
        raise ValueError("S1 must be (d, n) and S2 (d, n(n+1)/2)")
    return HighOrderStress((tuple((s,) for s in S0), tuple(map(tuple, S1)), tuple(map(tuple, S2))))


def eval_high(stress: HighOrderStress, A: JetPoint, point) -> float:
    if A.order != stress.order or (A.n, A.d) != (stress.n, stress.d):
        raise ValueError("jet shape does not match the stress")
    return float(sum(
        stress.components[p][a][s](point) * A.components[p][a, s]
        for p in range(stress.order + 1)
        for a in range(stress.d)
        for s in range(len(_sym(stress.n, p)))
    ))


def eval_second(stress: HighOrderStress, A: JetPoint, point) -> float:
    if stress.order != 2:
        raise ValueError("eval_second needs a second-order stress")
    return eval_high(stress, A, point)


# ---------------------------------------------------------------------------
# non-holonomic


def jet_fiber_index(d: int, n: int, alpha: int, i: int | None = None) -> int:
    """Position of ``u^alpha`` (i None) or ``u^alpha_{,i}`` in the flattened J^1 U fiber."""
    return alpha if i is None else d + alpha * n + i


def flatten_jet(section: JetField) -> list[ScalarField]:
    """A section of J^1 U as the d(1+n) component fields of a section of W = J^1 U."""
    return ([section.value(a) for a in range(section.d)]
            + [section.first(a, i) for a in range(section.d) for i in range(section.n)])


@dataclass(frozen=True)
class NonHolonomicStress:
    """Section of L(J^1(J^1 U), Lambda^n); Y3[a][i][j] pairs with B3[a, i, j], unsymmetrized."""

    Y0: tuple[ScalarField, ...]
    Y1: tuple[tuple[ScalarField, ...], ...]
    Y2: tuple[tuple[ScalarField, ...], ...]
    Y3: tuple[tuple[tuple[ScalarField, ...], ...], ...]

    @property
    def d(self) -> int:
        return len(self.Y0)

    @property
    def n(self) -> int:
        return self.Y0[0].dim

    def at(self, point) -> IteratedDualPoint:
        return IteratedDualPoint(
            np.array([f(point) for f in self.Y0]),
            np.array([[f(point) for f in row] for row in self.Y1]),
            np.array([[f(point) for f in row] for row in self.Y2]),
            np.array([[[f(point) for f in r] for r in block] for block in self.Y3]),
        )

    def as_first_order(self) -> Stress:
        """The same object as a first-order stress over the fiber J^1 U.

        Y0 and Y1 take the role of R; Y2 and the transposed Y3 take the role of
        S, because ``B3[a, j, i]`` is the i-th derivative of the slot ``u^a_{,j}``.
        """
        d, n = self.d, self.n
        R = list(self.Y0) + [self.Y1[a][j] for a in range(d) for j in range(n)]
        S = ([list(self.Y2[a]) for a in range(d)]
             + [[self.Y3[a][j][i] for i in range(n)] for a in range(d) for j in range(n)])
        return variational_stress(R, S)

    def map(self, fn) -> NonHolonomicStress:
        return NonHolonomicStress(
            tuple(fn(f) for f in self.Y0),
            tuple(tuple(fn(f) for f in row) for row in self.Y1),
            tuple(tuple(fn(f) for f in row) for row in self.Y2),
            tuple(tuple(tuple(fn(f) for f in r) for r in block) for block in self.Y3),
        )


def nonholonomic_stress(Y0, Y1, Y2, Y3) -> NonHolonomicStress:
    n = Y0[0].dim
    if any(len(r) != n for r in Y1) or any(len(r) != n for r in Y2) \
            or any(len(r) != n for block in Y3 for r in block) or any(len(b) != n for b in Y3):
        raise ValueError("Y1, Y2 must be (d, n) and Y3 (d, n, n)")
    return NonHolonomicStress(tuple(Y0), tuple(map(tuple, Y1)), tuple(map(tuple, Y2)),
                              tuple(tuple(map(tuple, block)) for block in Y3))


def eval_nh(Y: NonHolonomicStress, B: IteratedJetPoint, point) -> float:
    return pair_iterated(Y.at(point), B)


def nh_power(Y: NonHolonomicStress, section: JetField) -> FormField:
    """``Y(j^1 A)`` for a section A of J^1 U."""
    return Y.as_first_order().act(prolong_field(flatten_jet(section), 1))


def lift_second_order(stress: HighOrderStress) -> NonHolonomicStress:
    """Canonical non-holonomic representative of a second-order stress."""
    if stress.order != 2:
        raise ValueError("lift needs a second-order stress")
    n, d = stress.n, stress.d
    zero = PolyField.zero(n)
    Y3 = []
    for a in range(d):
        block = []
        for i in range(n):
            block.append(tuple(
                stress.S2[a][sym_slot(n, (i, j))] * (1.0 if i == j else 0.5) for j in range(n)
            ))
        Y3.append(tuple(block))
    return NonHolonomicStress(
        stress.S0,
        tuple((zero,) * n for _ in range(d)),
        tuple(tuple(row) for row in stress.S1),
        tuple(Y3),
    )


def restrict_nonholonomic(Y: NonHolonomicStress) -> HighOrderStress:
    """The second-order stress ``iota^* Y``."""
    n, d = Y.n, Y.d
    S1 = [[Y.Y1[a][i] + Y.Y2[a][i] for i in range(n)] for a in range(d)]
    S2 = [[Y.Y3[a][i][i] if i == j else Y.Y3[a][i][j] + Y.Y3[a][j][i] for (i, j) in _sym(n, 2)]
          for a in range(d)]
    return second_order_stress(list(Y.Y0), S1, S2)


def nh_traction(Y: NonHolonomicStress) -> Stress:
    """``Z = p_sigma(Y)``, a zeroth-order (n-1)-form valued stress over J^1 U."""
    return traction(Y.as_first_order())


def nh_divergence(Y: NonHolonomicStress) -> Stress:
    """``div Y``, a zeroth-order top-degree stress over J^1 U."""
    return divergence(Y.as_first_order())


def over_base(stress: Stress) -> Stress:
    """Reinterpret a zeroth-order stress over J^1 U as a first-order stress over U."""
    if not stress.is_zeroth_order:
        raise ValueError("over_base expects a zeroth-order stress over J^1 U")
    n = stress.dim
    total = stress.fiber_dim
    if total % (n + 1):
        raise ValueError(f"fiber dim {total} is not d(1 + n) for n = {n}")
    d = total // (n + 1)
    return Stress(
        tuple(stress.R[:d]),
        tuple(tuple(stress.R[jet_fiber_index(d, n, a, i)] for i in range(n)) for a in range(d)),
    )


def double_divergence(Y: NonHolonomicStress) -> Stress:
    """``div(div Y)``, a zeroth-order top-degree stress over U (a body-force-like object)."""
    return divergence(over_base(nh_divergence(Y)))


@dataclass(frozen=True)
class BoundaryStress:
    """Z seen on one face: the restricted stress, its traction and its divergence.

    All three live in the face chart; ``stress`` and ``divergence`` still act on
    the ambient jet ``j^1 u`` restricted to the face (normal derivative included).
    """

    face: object
    stress: Stress
    traction: Stress
    divergence: Stress


def boundary_divergence(Z: Stress, face, chart: str = "ambient") -> BoundaryStress:
    """Traction ``p_sigma(Z)`` and divergence ``div Z`` of Z on a face.

    ``chart="ambient"`` contracts Z in the ambient chart and then restricts, so
    the traction on every face is the restriction of a single (n-2)-form and
    shared-edge contributions cancel in pairs.  ``chart="face"`` restricts
    first and contracts only along the face's own axes; on a box this leaves
    non-cancelling edge terms whenever ``Y3[i][j] + Y3[j][i] != 0`` for
    ``i != j``.  In both cases ``div Z = d(p_sigma(Z)(u)) - Z(j^1 u)`` on the face.
    """
    Zu = over_base(Z) if Z.is_zeroth_order else Z
    n = Zu.dim
    if n < 2:
        raise ValueError("boundary divergence needs n >= 2")
    if chart == "ambient":
        axes = range(n)
    elif chart == "face":
        axes = face.tangential_axes
    else:
        raise ValueError(f"unknown chart {chart!r}")
    if Zu.is_zeroth_order or Zu.degree != n - 1:
        raise ValueError("expected Z as an (n-1)-form valued first-order stress")
    eta = [pullback_to_face(form_sum([interior_product(i, row[i]) for i in axes], n, n - 2), face)
           for row in Zu.S]
    restricted = Zu.restrict(face)
    coframe = [pullback_to_face(basis_form(n, j), face) for j in range(n)]
    return BoundaryStress(face, restricted, Stress(tuple(eta)), _divergence_with(restricted, eta, coframe))
