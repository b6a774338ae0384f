"""Scalar fields on a chart domain.

Two leaf kinds are provided: :class:`PolyField`, an exact multivariate
polynomial, and :class:`BlackBoxField`, an arbitrary vectorized evaluator whose
derivatives are taken by central finite differences.  Arithmetic between
polynomials stays polynomial; anything involving a black box builds a small
expression tree whose partial derivatives are pushed down to the leaves by
linearity and the Leibniz rule, so a black-box leaf only ever sees a single
accumulated multi-index and one finite-difference stencil.

Points are arrays of shape ``(N, dim)`` (or ``(dim,)`` for a single point) and
axes are 0-based.
"""

from __future__ import annotations

import itertools
from typing import Callable, Mapping, Sequence

import numpy as np

Exponents = tuple[int, ...]

# Base step for first derivatives; order-k derivatives use base * 10**(k-1).
DEFAULT_FD_STEP = 1e-5

# One-dimensional central stencils, (offset, weight) in units of h.
_STENCILS: dict[int, tuple[tuple[int, float], ...]] = {
    1: ((-1, -0.5), (1, 0.5)),
    2: ((-1, 1.0), (0, -2.0), (1, 1.0)),
    3: ((-2, -0.5), (-1, 1.0), (1, -1.0), (2, 0.5)),
    4: ((-2, 1.0), (-1, -4.0), (0, 6.0), (1, -4.0), (2, 1.0)),
}


def _as_points(x, dim: int) -> tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    single = pts.ndim == 1
    if single:
        pts = pts.reshape(1, -1)
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {np.shape(x)}")
    return pts, single


def _check_index(index: Sequence[int], dim: int) -> Exponents:
    index = tuple(int(e) for e in index)
    if len(index) != dim:
        raise ValueError(f"multi-index {index} has length {len(index)}, field dim is {dim}")
    if any(e < 0 for e in index):
        raise ValueError(f"multi-index {index} has negative entries")
    return index


def unit_index(dim: int, axis: int) -> Exponents:
    if not 0 <= axis < dim:
        raise ValueError(f"axis {axis} out of range for dim {dim}")
    return tuple(1 if i == axis else 0 for i in range(dim))


class ScalarField:
    """Real-valued function on an open subset of R^dim."""

    dim: int

    def __call__(self, x):
        pts, single = _as_points(x, self.dim)
        vals = self._eval(pts)
        return float(vals[0]) if single else vals

    def _eval(self, pts: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def diff(self, axis: int) -> ScalarField:
        raise NotImplementedError

    def partial(self, index: Sequence[int]) -> ScalarField:
        """Mixed partial derivative for an exponent multi-index ``(i_1, ..., i_n)``."""
        index = _check_index(index, self.dim)
        out: ScalarField = self
        for axis, e in enumerate(index):
            for _ in range(e):
                out = out.diff(axis)
        return out

    def restrict(self, axis: int, value: float) -> ScalarField:
        """Substitute ``x^axis = value``; the result lives on the remaining axes."""
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        return _Restricted(self, axis, float(value))

    def is_zero(self) -> bool:
        """True only when the field is known to vanish identically."""
        return False

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> ScalarField:
        if isinstance(other, ScalarField):
            if other.dim != self.dim:
                raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        if isinstance(other, (int, float, np.floating, np.integer)):
            return PolyField.constant(self.dim, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return linear_combination([(1.0, self), (1.0, other)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return linear_combination([(1.0, self), (-1.0, other)])

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return linear_combination([(1.0, other), (-1.0, self)])

    def __neg__(self):
        return linear_combination([(-1.0, self)])

    def __mul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return linear_combination([(float(other), self)])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PolyField.zero(self.dim)
        if isinstance(self, PolyField) and isinstance(other, PolyField):
            return self._poly_mul(other)
        return _Product(self, other)

    __rmul__ = __mul__


class PolyField(ScalarField):
    """Multivariate polynomial ``sum c_e x^e`` with float coefficients.

    ``terms`` maps exponent tuples to coefficients; zero coefficients are never
    stored, so the zero polynomial has no terms.
    """

    def __init__(self, dim: int, terms: Mapping[Sequence[int], float] | None = None):
        if dim < 0:
            raise ValueError("dim must be non-negative")
        self.dim = int(dim)
        clean: dict[Exponents, float] = {}
        for exps, c in (terms or {}).items():
            exps = _check_index(exps, self.dim)
            c = float(c)
            if c != 0.0:
                clean[exps] = clean.get(exps, 0.0) + c
                if clean[exps] == 0.0:
                    del clean[exps]
        self.terms: dict[Exponents, float] = clean
        self._packed = None

    @classmethod
    def zero(cls, dim: int) -> PolyField:
        return cls(dim)

    @classmethod
    def constant(cls, dim: int, c: float) -> PolyField:
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def coordinate(cls, dim: int, axis: int) -> PolyField:
        return cls(dim, {unit_index(dim, axis): 1.0})

    @classmethod
    def monomial(cls, exponents: Sequence[int], c: float = 1.0) -> PolyField:
        return cls(len(exponents), {tuple(exponents): c})

    def __repr__(self):
        if not self.terms:
            return f"PolyField({self.dim}, 0)"
        body = " + ".join(f"{c:g}*x^{e}" for e, c in sorted(self.terms.items()))
        return f"PolyField({self.dim}, {body})"

    def __eq__(self, other):
        if isinstance(other, PolyField):
            return self.dim == other.dim and self.terms == other.terms
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def _eval(self, pts):
        if not self.terms:
            return np.zeros(len(pts))
        if self._packed is None:
            exps = np.array(list(self.terms.keys()), dtype=float).reshape(len(self.terms), self.dim)
            coeffs = np.array(list(self.terms.values()))
            self._packed = (exps, coeffs)
        exps, coeffs = self._packed
        monomials = np.prod(pts[:, None, :] ** exps[None, :, :], axis=2)
        return monomials @ coeffs

    def diff(self, axis):
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        out: dict[Exponents, float] = {}
        for e, c in self.terms.items():
            if e[axis] == 0:
                continue
            lowered = e[:axis] + (e[axis] - 1,) + e[axis + 1:]
            out[lowered] = out.get(lowered, 0.0) + c * e[axis]
        return PolyField(self.dim, out)

    def restrict(self, axis, value):
        if not 0 <= axis < self.dim:
            raise ValueError(f"axis {axis} out of range for dim {self.dim}")
        out: dict[Exponents, float] = {}
        for e, c in self.terms.items():
            kept = e[:axis] + e[axis + 1:]
            out[kept] = out.get(kept, 0.0) + c * float(value) ** e[axis]
        return PolyField(self.dim - 1, out)

    def _poly_mul(self, other: PolyField) -> PolyField:
        out: dict[Exponents, float] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + c1 * c2
        return PolyField(self.dim, out)

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": c} for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, dim: int, data: Sequence[Mapping]) -> PolyField:
        terms: dict[Exponents, float] = {}
        for item in data:
            e = _check_index(item["exponents"], dim)
            terms[e] = terms.get(e, 0.0) + float(item["coeff"])
        return cls(dim, terms)


class BlackBoxField(ScalarField):
    """Field given by a vectorized evaluator ``f(points) -> values``.

    ``derivative`` is the exponent multi-index of a pending partial derivative,
    realised by a tensor-product central-difference stencil with step
    ``fd_step * 10**(order - 1)``.  If ``domain`` (a Region) is given, stencils
    reaching outside it raise ``ValueError``.
    """

    def __init__(
        self,
        dim: int,
        evaluator: Callable[[np.ndarray], np.ndarray],
        fd_step: float = DEFAULT_FD_STEP,
        derivative: Sequence[int] | None = None,
        domain=None,
    ):
        if fd_step <= 0:
            raise ValueError("fd_step must be positive")
        self.dim = int(dim)
        self.evaluator = evaluator
        self.fd_step = float(fd_step)
        self.derivative = _check_index(derivative or (0,) * self.dim, self.dim)
        self.domain = domain

    def __repr__(self):
        return f"BlackBoxField(dim={self.dim}, derivative={self.derivative})"

    @property
    def order(self) -> int:
        return sum(self.derivative)

    def step(self, order: int | None = None) -> float:
        order = self.order if order is None else order
        return self.fd_step * 10.0 ** (max(order, 1) - 1)

    def diff(self, axis):
        index = list(self.derivative)
        index[axis] += 1
        return BlackBoxField(self.dim, self.evaluator, self.fd_step, index, self.domain)

    def _raw(self, pts):
        return np.asarray(self.evaluator(pts), dtype=float).reshape(len(pts))

    def _eval(self, pts):
        if self.order == 0:
            return self._raw(pts)
        h = self.step()
        axes = [a for a, e in enumerate(self.derivative) if e > 0]
        for a in axes:
            if self.derivative[a] not in _STENCILS:
                raise ValueError(f"no central stencil for derivative order {self.derivative[a]}")
        out = np.zeros(len(pts))
        for combo in itertools.product(*(_STENCILS[self.derivative[a]] for a in axes)):
            shift = np.zeros(self.dim)
            weight = 1.0
            for a, (offset, w) in zip(axes, combo):
                shift[a] = offset * h
                weight *= w
            shifted = pts + shift
            if self.domain is not None:
                self._check_domain(shifted)
            out += weight * self._raw(shifted)
        return out / h ** self.order

    def _check_domain(self, pts):
        lo = np.array([b[0] for b in self.domain.bounds])
        hi = np.array([b[1] for b in self.domain.bounds])
        if np.any(pts < lo) or np.any(pts > hi):
            raise ValueError("finite-difference stencil leaves the field domain")

    @classmethod
    def wrap(cls, field: ScalarField, fd_step: float = DEFAULT_FD_STEP) -> BlackBoxField:
        """Hide ``field`` behind an evaluator so that only its values are used."""
        return cls(field.dim, field._eval, fd_step)


class _Linear(ScalarField):
    def __init__(self, dim, terms):
        self.dim = dim
        self.terms = tuple(terms)

    def _eval(self, pts):
        out = np.zeros(len(pts))
        for c, f in self.terms:
            out += c * f._eval(pts)
        return out

    def diff(self, axis):
        return linear_combination([(c, f.diff(axis)) for c, f in self.terms])

    def restrict(self, axis, value):
        return linear_combination([(c, f.restrict(axis, value)) for c, f in self.terms])


class _Product(ScalarField):
    def __init__(self, a: ScalarField, b: ScalarField):
        self.dim = a.dim
        self.a, self.b = a, b

    def _eval(self, pts):
        return self.a._eval(pts) * self.b._eval(pts)

    def diff(self, axis):
        return self.a.diff(axis) * self.b + self.a * self.b.diff(axis)

    def restrict(self, axis, value):
        return self.a.restrict(axis, value) * self.b.restrict(axis, value)


class _Restricted(ScalarField):
    def __init__(self, parent: ScalarField, axis: int, value: float):
        self.dim = parent.dim - 1
        self.parent, self.axis, self.value = parent, axis, value

    def _lift(self, pts):
        return np.insert(pts, self.axis, self.value, axis=1)

    def _eval(self, pts):
        return self.parent._eval(self._lift(pts))

    def diff(self, axis):
        ambient = axis if axis < self.axis else axis + 1
        return self.parent.diff(ambient).restrict(self.axis, self.value)


def linear_combination(terms: Sequence[tuple[float, ScalarField]]) -> ScalarField:
    """``sum c_k f_k`` with polynomial terms collected exactly."""
    if not terms:
        raise ValueError("empty linear combination")
    dim = terms[0][1].dim
    poly: dict[Exponents, float] = {}
    rest: list[tuple[float, ScalarField]] = []
    for c, f in terms:
        if f.dim != dim:
            raise ValueError(f"dimension mismatch: {dim} vs {f.dim}")
        if c == 0.0 or f.is_zero():
            continue
        if isinstance(f, PolyField):
            for e, v in f.terms.items():
                poly[e] = poly.get(e, 0.0) + c * v
        elif isinstance(f, _Linear):
            rest.extend((c * c2, f2) for c2, f2 in f.terms)
        else:
            rest.append((c, f))
    p = PolyField(dim, poly)
    if not rest:
        return p
    if not p.is_zero():
        rest.append((1.0, p))
    if len(rest) == 1 and rest[0][0] == 1.0:
        return rest[0][1]
    return _Linear(dim, rest)


def field_sum(fields: Sequence[ScalarField], dim: int) -> ScalarField:
    if not fields:
        return PolyField.zero(dim)
    return linear_combination([(1.0, f) for f in fields])


def poly_partial(f: PolyField, multi_index: Sequence[int]) -> PolyField:
    if not isinstance(f, PolyField):
        raise TypeError("poly_partial needs a PolyField")
    return f.partial(multi_index)


def poly_integrate_box(f: PolyField, region) -> float:
    """Exact monomial-wise integral of ``f`` over a box region."""
    if f.dim != region.dim:
        raise ValueError(f"field dim {f.dim} does not match region dim {region.dim}")
    total = 0.0
    for e, c in f.terms.items():
        term = c
        for k, (lo, hi) in zip(e, region.bounds):
            term *= (hi ** (k + 1) - lo ** (k + 1)) / (k + 1)
        total += term
    return total


def fd_partial(f: BlackBoxField, axis: int, point) -> float:
    """Central difference of ``f`` along ``axis`` at a single point."""
    return float(f.diff(axis)(np.asarray(point, dtype=float)))


def random_poly(seed: int, dim: int, max_degree: int) -> PolyField:
    """Dense random polynomial of total degree <= max_degree, coefficients in [-1, 1]."""
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    rng = np.random.default_rng(seed)
    exps = [e for e in itertools.product(range(max_degree + 1), repeat=dim) if sum(e) <= max_degree]
    coeffs = rng.uniform(-1.0, 1.0, size=len(exps))
    return PolyField(dim, dict(zip(exps, coeffs)))

