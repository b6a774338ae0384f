"""Jets of vector-bundle sections, iterated jets, and the inclusion J^2 -> J^1(J^1).

Symmetric multi-indices of order p are stored as sorted axis tuples in
lexicographic order (:func:`enumerate_sym`).  A k-jet point holds, for each
order p, an array of shape ``(d, C(n + p - 1, p))``.

Pairing convention for second-order duals: the coefficient ``S2[a, slot(I)]``
multiplies ``A2[a, slot(I)]`` with no multinomial weight.  This is the only
place the multiplicity of off-diagonal entries appears: restricting an
iterated dual sends ``X3[i, j] + X3[j, i]`` to the slot of ``(i, j)`` when
``i < j`` and ``X3[i, i]`` to the diagonal slot.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .scalars import ScalarField


@lru_cache(maxsize=None)
def _sym(n: int, p: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.combinations_with_replacement(range(n), p))


def enumerate_sym(n: int, p: int) -> list[tuple[int, ...]]:
    """Sorted index tuples of length p over n axes, lexicographically."""
    if n < 1 or p < 0:
        raise ValueError("need n >= 1 and p >= 0")
    return list(_sym(n, p))


@lru_cache(maxsize=None)
def _slots(n: int, p: int) -> dict[tuple[int, ...], int]:
    return {idx: s for s, idx in enumerate(_sym(n, p))}


def sym_slot(n: int, idx: Sequence[int]) -> int:
    """Storage position of the symmetric index ``idx`` (any order)."""
    return _slots(n, len(idx))[tuple(sorted(idx))]


def to_exponents(n: int, idx: Sequence[int]) -> tuple[int, ...]:
    """Sorted index tuple -> exponent multi-index ``(i_1, ..., i_n)``."""
    e = [0] * n
    for a in idx:
        e[a] += 1
    return tuple(e)


@dataclass(frozen=True)
class JetPoint:
    n: int
    d: int
    components: tuple[np.ndarray, ...]

    def __post_init__(self):
        for p, arr in enumerate(self.components):
            if arr.shape != (self.d, len(_sym(self.n, p))):
                raise ValueError(f"order-{p} block has shape {arr.shape}")

    @property
    def order(self) -> int:
        return len(self.components) - 1

    def get(self, p: int, alpha: int, idx: Sequence[int] = ()) -> float:
        return float(self.components[p][alpha, sym_slot(self.n, idx)])

    @classmethod
    def zeros(cls, n: int, d: int, k: int) -> JetPoint:
        return cls(n, d, tuple(np.zeros((d, len(_sym(n, p)))) for p in range(k + 1)))

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, d: int, k: int) -> JetPoint:
        return cls(n, d, tuple(rng.uniform(-1, 1, (d, len(_sym(n, p)))) for p in range(k + 1)))


@dataclass(frozen=True)
class JetField:
    """A section of J^k W given componentwise as scalar fields.

    ``components[p][a][slot]``.  Nothing ties the orders together, so arbitrary
    (non-holonomic) sections are representable; :func:`prolong_field` builds
    the holonomic ones.  ``n`` counts jet axes, which may exceed the dimension
    of the fields after restriction to a face.
    """

    n: int
    d: int
    components: tuple[tuple[tuple[ScalarField, ...], ...], ...]

    @property
    def order(self) -> int:
        return len(self.components) - 1

    def value(self, alpha: int) -> ScalarField:
        return self.components[0][alpha][0]

    def first(self, alpha: int, i: int) -> ScalarField:
        return self.components[1][alpha][i]

    def at(self, point) -> JetPoint:
        point = np.asarray(point, dtype=float)
        return JetPoint(self.n, self.d, tuple(
            np.array([[f(point) for f in row] for row in block]).reshape(self.d, -1)
            for block in self.components
        ))

    def restrict(self, face) -> JetField:
        """Pull every component back to a face chart; jet axes stay ambient."""
        return JetField(self.n, self.d, tuple(
            tuple(tuple(f.restrict(face.axis, face.value) for f in row) for row in block)
            for block in self.components
        ))


def prolong_field(section: Sequence[ScalarField], k: int) -> JetField:
    """``j^k w``: components are the partials ``d^I w^a`` for ``|I| <= k``."""
    if not section:
        raise ValueError("empty section")
    if k < 0:
        raise ValueError("k must be >= 0")
    n = section[0].dim
    if any(w.dim != n for w in section):
        raise ValueError("section components live on different charts")
    return JetField(n, len(section), tuple(
        tuple(tuple(w.partial(to_exponents(n, idx)) for idx in _sym(n, p)) for w in section)
        for p in range(k + 1)
    ))


def prolong(section: Sequence[ScalarField], k: int, point) -> JetPoint:
    return prolong_field(section, k).at(point)


def jet_section(A0: Sequence[ScalarField], A1: Sequence[Sequence[ScalarField]]) -> JetField:
    """A section of J^1 U from arbitrary value and derivative fields."""
    n = A0[0].dim
    if len(A1) != len(A0) or any(len(row) != n for row in A1):
        raise ValueError("A1 must have shape (d, n)")
    return JetField(n, len(A0), (tuple((a,) for a in A0), tuple(tuple(row) for row in A1)))


def project(jet: JetPoint | JetField, p: int):
    """Truncate a jet to orders <= p."""
    if not 0 <= p <= jet.order:
        raise ValueError(f"cannot project an order-{jet.order} jet to order {p}")
    return type(jet)(jet.n, jet.d, jet.components[:p + 1])


@dataclass(frozen=True)
class IteratedJetPoint:
    """Element of J^1(J^1 U); B3[a, i, j] is the j-th derivative of the i-th slot."""

    B0: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    B3: np.ndarray

    @property
    def d(self) -> int:
        return self.B0.shape[0]

    @property
    def n(self) -> int:
        return self.B1.shape[1]

    def is_holonomic(self, tol: float = 0.0) -> bool:
        return bool(
            np.all(np.abs(self.B1 - self.B2) <= tol)
            and np.all(np.abs(self.B3 - np.swapaxes(self.B3, 1, 2)) <= tol)
        )

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, d: int) -> IteratedJetPoint:
        return cls(rng.uniform(-1, 1, d), rng.uniform(-1, 1, (d, n)),
                   rng.uniform(-1, 1, (d, n)), rng.uniform(-1, 1, (d, n, n)))


@dataclass(frozen=True)
class IteratedDualPoint:
    X0: np.ndarray
    X1: np.ndarray
    X2: np.ndarray
    X3: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, d: int) -> IteratedDualPoint:
        return cls(rng.uniform(-1, 1, d), rng.uniform(-1, 1, (d, n)),
                   rng.uniform(-1, 1, (d, n)), rng.uniform(-1, 1, (d, n, n)))


@dataclass(frozen=True)
class SecondOrderDual:
    """Element of (J^2 U)^*: S2 is stored per sorted pair, see the module docstring."""

    S0: np.ndarray
    S1: np.ndarray
    S2: np.ndarray

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, d: int) -> SecondOrderDual:
        return cls(rng.uniform(-1, 1, d), rng.uniform(-1, 1, (d, n)),
                   rng.uniform(-1, 1, (d, len(_sym(n, 2)))))


def iterate_prolong(section: JetField, point) -> IteratedJetPoint:
    """``j^1 A`` at a point for a section A of J^1 U, holonomic or not."""
    if section.order < 1:
        raise ValueError("need a section of J^1 U")
    n, d = section.n, section.d
    point = np.asarray(point, dtype=float)
    B0 = np.array([section.value(a)(point) for a in range(d)])
    B1 = np.array([[section.first(a, i)(point) for i in range(n)] for a in range(d)])
    B2 = np.array([[section.value(a).diff(i)(point) for i in range(n)] for a in range(d)])
    B3 = np.array([[[section.first(a, i).diff(j)(point) for j in range(n)]
                    for i in range(n)] for a in range(d)])
    return IteratedJetPoint(B0, B1, B2, B3)


def include_second(A: JetPoint) -> IteratedJetPoint:
    """The natural inclusion J^2 U -> J^1(J^1 U)."""
    if A.order != 2:
        raise ValueError("include_second needs an order-2 jet")
    n, d = A.n, A.d
    B3 = np.empty((d, n, n))
    for i in range(n):
        for j in range(n):
            B3[:, i, j] = A.components[2][:, sym_slot(n, (i, j))]
    return IteratedJetPoint(A.components[0][:, 0].copy(), A.components[1].copy(),
                            A.components[1].copy(), B3)


def pair_iterated(X: IteratedDualPoint, B: IteratedJetPoint) -> float:
    return float(np.sum(X.X0 * B.B0) + np.sum(X.X1 * B.B1)
                 + np.sum(X.X2 * B.B2) + np.sum(X.X3 * B.B3))


def pair_second(S: SecondOrderDual, A: JetPoint) -> float:
    if A.order != 2:
        raise ValueError("pair_second needs an order-2 jet")
    return float(np.sum(S.S0 * A.components[0][:, 0]) + np.sum(S.S1 * A.components[1])
                 + np.sum(S.S2 * A.components[2]))


def restrict_dual(X: IteratedDualPoint) -> SecondOrderDual:
    """The dual restriction (J^1(J^1 U))^* -> (J^2 U)^*; surjective, not injective."""
    d, n = X.X1.shape
    S2 = np.empty((d, len(_sym(n, 2))))
    for s, (i, j) in enumerate(_sym(n, 2)):
        S2[:, s] = X.X3[:, i, i] if i == j else X.X3[:, i, j] + X.X3[:, j, i]
    return SecondOrderDual(X.X0.copy(), X.X1 + X.X2, S2)


def lift_dual(S: SecondOrderDual) -> IteratedDualPoint:
    """Canonical right inverse of :func:`restrict_dual`: derivative weight on X2, symmetric X3."""
    d, n = S.S1.shape
    X3 = np.empty((d, n, n))
    for s, (i, j) in enumerate(_sym(n, 2)):
        if i == j:
            X3[:, i, i] = S.S2[:, s]
        else:
            X3[:, i, j] = X3[:, j, i] = 0.5 * S.S2[:, s]
    return IteratedDualPoint(S.S0.copy(), np.zeros((d, n)), S.S1.copy(), X3)
