"""Alternating covariant tensor fields in chart coordinates.

A p-form on an n-dimensional chart is stored as a map from strictly increasing
axis tuples ``(i_1 < ... < i_p)`` to scalar fields, the coefficient of
``dx^{i_1} ^ ... ^ dx^{i_p}``.  Missing entries are zero.
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Mapping, Sequence

from .scalars import PolyField, ScalarField, field_sum

if TYPE_CHECKING:
    from .geometry import OrientedFace

Axes = tuple[int, ...]


def _sort_with_sign(axes: Sequence[int]) -> tuple[int, Axes]:
    """Sort ``axes`` by transpositions; sign 0 if an axis repeats."""
    axes = list(axes)
    if len(set(axes)) != len(axes):
        return 0, ()
    sign = 1
    for i in range(len(axes)):
        for j in range(len(axes) - 1 - i):
            if axes[j] > axes[j + 1]:
                axes[j], axes[j + 1] = axes[j + 1], axes[j]
                sign = -sign
    return sign, tuple(axes)


def omit(dim: int, k: int) -> Axes:
    """Index tuple of ``dx^0 ^ ... ^ (dx^k omitted) ^ ... ^ dx^{n-1}``."""
    return tuple(i for i in range(dim) if i != k)


class FormField:
    def __init__(self, dim: int, degree: int, components: Mapping[Sequence[int], ScalarField | float] | None = None):
        if not 0 <= degree <= dim:
            raise ValueError(f"degree {degree} out of range for dim {dim}")
        self.dim = dim
        self.degree = degree
        comps: dict[Axes, ScalarField] = {}
        for axes, f in (components or {}).items():
            axes = tuple(axes)
            if len(axes) != degree or any(a >= b for a, b in zip(axes, axes[1:])):
                raise ValueError(f"component index {axes} is not an increasing {degree}-tuple")
            if axes and not (0 <= axes[0] and axes[-1] < dim):
                raise ValueError(f"component index {axes} out of range for dim {dim}")
            if not isinstance(f, ScalarField):
                f = PolyField.constant(dim, float(f))
            elif f.dim != dim:
                raise ValueError(f"component field has dim {f.dim}, form has dim {dim}")
            if not f.is_zero():
                comps[axes] = f
        self.components = comps

    def __repr__(self):
        return f"FormField(dim={self.dim}, degree={self.degree}, components={self.components!r})"

    def component(self, axes: Sequence[int]) -> ScalarField:
        return self.components.get(tuple(axes), PolyField.zero(self.dim))

    @property
    def coefficient(self) -> ScalarField:
        """Single component of a top-degree form."""
        if self.degree != self.dim:
            raise ValueError("coefficient is only defined for top-degree forms")
        return self.component(tuple(range(self.dim)))

    def is_zero(self) -> bool:
        return not self.components

    def at(self, point) -> dict[Axes, float]:
        return {axes: f(point) for axes, f in self.components.items()}

    def _check(self, other: FormField):
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise ValueError(
                f"form mismatch: ({self.dim}, {self.degree}) vs ({other.dim}, {other.degree})"
            )

    def __add__(self, other):
        if not isinstance(other, FormField):
            return NotImplemented
        self._check(other)
        keys = set(self.components) | set(other.components)
        return FormField(self.dim, self.degree, {
            k: field_sum([f for f in (self.components.get(k), other.components.get(k)) if f is not None], self.dim)
            for k in keys
        })

    def __neg__(self):
        return FormField(self.dim, self.degree, {k: -f for k, f in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Multiply by a scalar field or a number."""
        if isinstance(other, FormField):
            return NotImplemented
        return FormField(self.dim, self.degree, {k: f * other for k, f in self.components.items()})

    __rmul__ = __mul__


def zero_form(dim: int, degree: int) -> FormField:
    return FormField(dim, degree)


def function_form(f: ScalarField) -> FormField:
    return FormField(f.dim, 0, {(): f})


def top_form(f: ScalarField) -> FormField:
    return FormField(f.dim, f.dim, {tuple(range(f.dim)): f})


def basis_form(dim: int, *axes: int, coeff: ScalarField | float = 1.0) -> FormField:
    """``coeff * dx^{a_1} ^ ... ^ dx^{a_p}`` for axes in any order."""
    sign, ordered = _sort_with_sign(axes)
    if sign == 0:
        return FormField(dim, len(axes))
    if not isinstance(coeff, ScalarField):
        coeff = PolyField.constant(dim, float(coeff))
    return FormField(dim, len(axes), {ordered: coeff * float(sign)})


def form_sum(forms: Sequence[FormField], dim: int, degree: int) -> FormField:
    out = FormField(dim, degree)
    for f in forms:
        out = out + f
    return out


def wedge(omega: FormField, eta: FormField) -> FormField:
    if omega.dim != eta.dim:
        raise ValueError("wedge of forms on different charts")
    degree = omega.degree + eta.degree
    if degree > omega.dim:
        raise ValueError(f"wedge degree {degree} exceeds dim {omega.dim}")
    acc: dict[Axes, list] = {}
    for a, f in omega.components.items():
        for b, g in eta.components.items():
            sign, axes = _sort_with_sign(a + b)
            if sign:
                acc.setdefault(axes, []).append(f * g * float(sign))
    return FormField(omega.dim, degree, {k: field_sum(v, omega.dim) for k, v in acc.items()})


def interior_product(axis: int, omega: FormField) -> FormField:
    """Contraction of ``d/dx^axis`` with ``omega``."""
    if omega.degree < 1:
        raise ValueError("interior product of a 0-form")
    if not 0 <= axis < omega.dim:
        raise ValueError(f"axis {axis} out of range for dim {omega.dim}")
    out = {}
    for axes, f in omega.components.items():
        if axis in axes:
            q = axes.index(axis)
            out[axes[:q] + axes[q + 1:]] = f if q % 2 == 0 else -f
    return FormField(omega.dim, omega.degree - 1, out)


def exterior_derivative(omega: FormField) -> FormField:
    if omega.degree >= omega.dim:
        raise ValueError("exterior derivative of a top-degree form")
    acc: dict[Axes, list] = {}
    for axes, f in omega.components.items():
        for j in range(omega.dim):
            if j in axes:
                continue
            sign, new = _sort_with_sign((j,) + axes)
            df = f.diff(j)
            if not df.is_zero():
                acc.setdefault(new, []).append(df * float(sign))
    return FormField(omega.dim, omega.degree + 1, {k: field_sum(v, omega.dim) for k, v in acc.items()})


def pullback_to_face(omega: FormField, face: OrientedFace) -> FormField:
    """Restriction of ``omega`` to a face, in the face chart's ascending coordinates."""
    n = face.region.dim
    if omega.dim != n:
        raise ValueError(f"form dim {omega.dim} does not match face region dim {n}")
    if omega.degree > n - 1:
        raise ValueError("cannot pull back a top-degree form to a face")
    k, value = face.axis, face.value
    out = {}
    for axes, f in omega.components.items():
        if k in axes:
            continue
        out[tuple(a if a < k else a - 1 for a in axes)] = f.restrict(k, value)
    return FormField(n - 1, omega.degree, out)
