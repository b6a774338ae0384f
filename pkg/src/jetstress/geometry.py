"""Box regions in a single chart, their oriented faces and edges, and quadrature.

A face of the box ``B`` is the slab ``x^k = lo_k`` or ``x^k = hi_k``.  Its chart
uses the remaining coordinates in ascending order, and the Stokes orientation
lives in :attr:`OrientedFace.induced_sign` (never in the pulled-back forms), so
that ``int_B d(omega) = sum_F induced_sign * int_{chart(F)} pullback(omega)``.
Axes are 0-based, hence the hi-side sign is ``(-1)**axis``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import TYPE_CHECKING, Sequence

import numpy as np

if TYPE_CHECKING:
    from .forms import FormField

DEFAULT_QUAD_ORDER = 8


@dataclass(frozen=True)
class Region:
    bounds: tuple[tuple[float, float], ...]
    orientation: int = 1

    def __post_init__(self):
        if len(self.bounds) < 1:
            raise ValueError("a region needs at least one axis")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"inverted or empty bound ({lo}, {hi})")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    @property
    def dim(self) -> int:
        return len(self.bounds)

    @property
    def volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in self.bounds]))

    def contains(self, pts, tol: float = 0.0) -> np.ndarray:
        pts = np.atleast_2d(pts)
        lo = np.array([b[0] for b in self.bounds]) - tol
        hi = np.array([b[1] for b in self.bounds]) + tol
        return np.all((pts >= lo) & (pts <= hi), axis=1)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        lo = np.array([b[0] for b in self.bounds])
        hi = np.array([b[1] for b in self.bounds])
        return lo + (hi - lo) * rng.random((count, self.dim))


def make_box_region(dim: int, bounds: Sequence[Sequence[float]]) -> Region:
    if dim < 1:
        raise ValueError("dim must be >= 1")
    if len(bounds) != dim:
        raise ValueError(f"expected {dim} bound pairs, got {len(bounds)}")
    pairs = []
    for b in bounds:
        if len(b) != 2:
            raise ValueError(f"bound {b!r} is not a (lo, hi) pair")
        pairs.append((float(b[0]), float(b[1])))
    return Region(tuple(pairs))


@dataclass(frozen=True)
class OrientedFace:
    region: Region
    axis: int
    side: str
    induced_sign: int

    @property
    def value(self) -> float:
        lo, hi = self.region.bounds[self.axis]
        return hi if self.side == "hi" else lo

    @property
    def chart(self) -> Region | None:
        """The face as a box in its own coordinates; None for the point faces of a 1-d region."""
        rest = tuple(b for i, b in enumerate(self.region.bounds) if i != self.axis)
        return Region(rest) if rest else None

    @property
    def tangential_axes(self) -> tuple[int, ...]:
        """Ambient axis of each face-chart coordinate."""
        return tuple(i for i in range(self.region.dim) if i != self.axis)

    def to_ambient(self, pts: np.ndarray) -> np.ndarray:
        return np.insert(np.atleast_2d(pts), self.axis, self.value, axis=1)

    def flipped(self) -> OrientedFace:
        side = "lo" if self.side == "hi" else "hi"
        return OrientedFace(self.region, self.axis, side, -self.induced_sign)

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        if self.region.dim < 2:
            raise ValueError("faces of a 1-d region have no edges")
        return tuple(
            Edge(self, sub, self.induced_sign * sub.induced_sign)
            for sub in boundary_faces(self.chart)
        )


@dataclass(frozen=True)
class Edge:
    """A face of a face chart, seen from that face.

    ``sign`` is the product of the face and sub-face induced signs.  ``key``
    identifies the underlying ambient codimension-2 box, so that the two faces
    sharing an edge can be paired up.
    """

    face: OrientedFace
    chart_face: OrientedFace
    sign: int

    @property
    def ambient_axis(self) -> int:
        return self.face.tangential_axes[self.chart_face.axis]

    @property
    def key(self) -> frozenset:
        return frozenset({(self.face.axis, self.face.side), (self.ambient_axis, self.chart_face.side)})


def boundary_faces(region: Region) -> list[OrientedFace]:
    faces = []
    for k in range(region.dim):
        hi_sign = (-1) ** k * region.orientation
        faces.append(OrientedFace(region, k, "lo", -hi_sign))
        faces.append(OrientedFace(region, k, "hi", hi_sign))
    return faces


@lru_cache(maxsize=None)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product Gauss-Legendre rule with ``order`` points per axis."""

    order: int = DEFAULT_QUAD_ORDER

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("quadrature order must be >= 1")

    @property
    def exactness(self) -> int:
        return 2 * self.order - 1

    def box(self, region: Region | None) -> tuple[np.ndarray, np.ndarray]:
        """Nodes ``(N, dim)`` and weights ``(N,)``; a 0-dimensional chart is one unit-weight point."""
        if region is None:
            return np.zeros((1, 0)), np.ones(1)
        return _box_rule(self.order, region.bounds)


@lru_cache(maxsize=256)
def _box_rule(order, bounds):
    x, w = _gauss_legendre(order)
    axes, weights = [], []
    for lo, hi in bounds:
        half = 0.5 * (hi - lo)
        axes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    grids = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wgrid = np.meshgrid(*weights, indexing="ij")
    wts = np.prod(np.stack([g.ravel() for g in wgrid], axis=1), axis=1)
    pts.flags.writeable = False
    wts.flags.writeable = False
    return pts, wts


DEFAULT_RULE = QuadratureRule()


def _integrate_top(omega: FormField, chart: Region | None, rule: QuadratureRule) -> float:
    pts, wts = rule.box(chart)
    return float(np.dot(wts, omega.coefficient._eval(pts)))


def integrate_top_form(omega: FormField, region: Region, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """``int_B f dx^1 ^ ... ^ dx^n`` for the single component ``f`` of ``omega``."""
    if omega.degree != region.dim or omega.dim != region.dim:
        raise ValueError(f"need a top-degree form on dim {region.dim}, got degree {omega.degree}")
    return region.orientation * _integrate_top(omega, region, rule)


def integrate_face_form(omega: FormField, face: OrientedFace, rule: QuadratureRule = DEFAULT_RULE) -> float:
    """Integral of the pullback of an (n-1)-form over a face, with its induced sign."""
    from .forms import pullback_to_face

    n = face.region.dim
    if omega.dim != n or omega.degree != n - 1:
        raise ValueError(f"need an {n - 1}-form on dim {n}, got degree {omega.degree} on dim {omega.dim}")
    return face.induced_sign * _integrate_top(pullback_to_face(omega, face), face.chart, rule)
