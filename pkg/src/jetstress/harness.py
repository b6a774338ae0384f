"""Scenario loading and the identity checks behind the command-line tool.

A scenario names a mode, a box, and either explicit polynomial coefficient
lists for every field or a seed from which missing fields are generated.
Each check returns a :class:`ResidualReport` with one row per identity.
"""

from __future__ import annotations

import csv
import io
import json
import time
from collections import defaultdict
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .geometry import QuadratureRule, Region, boundary_faces, integrate_face_form, integrate_top_form, make_box_region
from .jets import JetField, jet_section, prolong_field
from .scalars import BlackBoxField, PolyField, ScalarField, random_poly
from .stress import (
    NonHolonomicStress,
    body_force,
    boundary_divergence,
    divergence_terms,
    double_divergence,
    lift_second_order,
    nh_divergence,
    nh_power,
    nh_traction,
    nonholonomic_stress,
    over_base,
    second_order_stress,
    traction,
    variational_stress,
)

MODES = ("first_order", "second_order", "nonholonomic", "edge_cancel")

# (tolerance, criterion) per identity; FD mode replaces all with FD_TOLERANCE absolute.
TOLERANCES = {
    "virtual_work": (1e-10, "relative"),
    "divergence_definition": (1e-12, "relative"),
    "nonholonomic_first": (1e-10, "relative"),
    "terminal": (1e-9, "relative"),
    "edge_cancellation": (1e-10, "absolute"),
    "lift_consistency": (1e-10, "relative"),
}
FD_TOLERANCE = 1e-6

DEFAULT_DEGREES = {
    "first_order": {"stress": 3, "section": 3},
    "second_order": {"stress": 2, "section": 3},
    "nonholonomic": {"stress": 2, "section": 3},
    "edge_cancel": {"stress": 2, "section": 3},
}


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input."""


@dataclass
class Scenario:
    name: str
    mode: str
    n: int
    d: int = 1
    bounds: list = field(default_factory=list)
    quad_order: int = 8
    seed: int | None = None
    fields: dict = field(default_factory=dict)
    degrees: dict = field(default_factory=dict)
    tolerance: float | None = None
    fd: bool = False
    lift: bool = False
    boundary_chart: str = "ambient"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ScenarioError(f"unknown mode {self.mode!r}")
        if self.n < 1 or self.d < 1:
            raise ScenarioError("n and d must be positive")
        if not self.bounds:
            self.bounds = [[0.0, 1.0]] * self.n
        if len(self.bounds) != self.n:
            raise ScenarioError(f"{len(self.bounds)} bounds for n = {self.n}")
        if self.mode != "first_order" and self.n < 2:
            raise ScenarioError(f"mode {self.mode} needs n >= 2")
        self.degrees = {**DEFAULT_DEGREES[self.mode], **self.degrees}

    @property
    def region(self) -> Region:
        try:
            return make_box_region(self.n, self.bounds)
        except ValueError as exc:
            raise ScenarioError(str(exc)) from exc

    @property
    def rule(self) -> QuadratureRule:
        return QuadratureRule(self.quad_order)

    @classmethod
    def from_dict(cls, data: dict) -> Scenario:
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ScenarioError(str(exc)) from exc

    def to_dict(self) -> dict:
        return asdict(self)


def load_scenario(path: str | Path) -> Scenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: {exc}") from exc
    return Scenario.from_dict(data)


def shipped_scenarios() -> list[Scenario]:
    root = resources.files("jetstress") / "scenarios"
    out = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if entry.name.endswith(".json"):
            out.append(Scenario.from_dict(json.loads(entry.read_text())))
    return out


# ---------------------------------------------------------------------------
# field materialization


class _Fields:
    """Explicit fields from the scenario, with seeded fallbacks drawn in a fixed order."""

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.rng = np.random.default_rng(sc.seed) if sc.seed is not None else None

    def poly(self, raw, kind: str, path: str) -> ScalarField:
        if raw is not None:
            try:
                f = PolyField.from_json(self.sc.n, raw)
            except (KeyError, TypeError, ValueError) as exc:
                raise ScenarioError(f"bad polynomial at {path}: {exc}") from exc
        else:
            if self.rng is None:
                raise ScenarioError(f"field {path} missing and no seed given")
            f = random_poly(int(self.rng.integers(2**31)), self.sc.n, self.sc.degrees[kind])
        return BlackBoxField.wrap(f) if self.sc.fd else f

    def array(self, raw, shape: tuple[int, ...], kind: str, path: str):
        if raw is not None and len(raw) != shape[0]:
            raise ScenarioError(f"{path} has {len(raw)} entries, expected {shape[0]}")
        if len(shape) == 1:
            return [self.poly(None if raw is None else raw[i], kind, f"{path}[{i}]") for i in range(shape[0])]
        return [self.array(None if raw is None else raw[i], shape[1:], kind, f"{path}[{i}]")
                for i in range(shape[0])]


def _section(sc: Scenario, fields: _Fields):
    return fields.array(sc.fields.get("section"), (sc.d,), "section", "section")


def _first_order_inputs(sc: Scenario):
    fields = _Fields(sc)
    raw = sc.fields.get("stress", {})
    R = fields.array(raw.get("R"), (sc.d,), "stress", "stress.R")
    S = fields.array(raw.get("S"), (sc.d, sc.n), "stress", "stress.S")
    return variational_stress(R, S), _section(sc, fields)


def _nonholonomic_inputs(sc: Scenario):
    """(Y, second-order stress it was lifted from or None, field source)."""
    fields = _Fields(sc)
    n, d = sc.n, sc.d
    if "second_order_stress" in sc.fields or (sc.lift and "nonholonomic_stress" not in sc.fields):
        raw = sc.fields.get("second_order_stress", {})
        S0 = fields.array(raw.get("S0"), (d,), "stress", "S0")
        S1 = fields.array(raw.get("S1"), (d, n), "stress", "S1")
        S2 = fields.array(raw.get("S2"), (d, n * (n + 1) // 2), "stress", "S2")
        high = second_order_stress(S0, S1, S2)
        return lift_second_order(high), high, fields
    raw = sc.fields.get("nonholonomic_stress", {})
    Y = nonholonomic_stress(
        fields.array(raw.get("Y0"), (d,), "stress", "Y0"),
        fields.array(raw.get("Y1"), (d, n), "stress", "Y1"),
        fields.array(raw.get("Y2"), (d, n), "stress", "Y2"),
        fields.array(raw.get("Y3"), (d, n, n), "stress", "Y3"),
    )
    return Y, None, fields


# ---------------------------------------------------------------------------
# reports


@dataclass
class IdentityResult:
    identity: str
    terms: dict[str, float]
    abs_residual: float
    rel_residual: float
    tolerance: float
    criterion: str
    passed: bool


@dataclass
class ResidualReport:
    scenario: str
    mode: str
    identities: list[IdentityResult]
    fd: bool = False
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.identities)

    def to_dict(self, include_time: bool = True) -> dict[str, Any]:
        out = {"scenario": self.scenario, "mode": self.mode, "fd": self.fd, "pass": self.passed,
               "identities": [asdict(r) for r in self.identities]}
        if include_time:
            out["wall_time"] = self.wall_time
        return out

    def csv_rows(self) -> list[dict[str, Any]]:
        return [{
            "scenario": self.scenario,
            "identity": r.identity,
            "terms": ";".join(f"{k}={v!r}" for k, v in r.terms.items()),
            "abs_residual": repr(r.abs_residual),
            "rel_residual": repr(r.rel_residual),
            "pass": r.passed,
        } for r in self.identities]


CSV_COLUMNS = ["scenario", "identity", "terms", "abs_residual", "rel_residual", "pass"]


def format_reports(reports: list[ResidualReport], fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for r in reports:
            writer.writerows(r.csv_rows())
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def make_result(identity: str, terms: dict[str, float], residual: float, sc: Scenario,
                tol: float | None = None, rel: float | None = None) -> IdentityResult:
    """Build a result row; relative residual is |residual| / max(1, max |term|)."""
    base_tol, criterion = TOLERANCES[identity]
    if sc.fd:
        base_tol, criterion = FD_TOLERANCE, "absolute"
    for override in (sc.tolerance, tol):
        if override is not None:
            base_tol = override
    terms = {k: float(v) for k, v in terms.items()}
    a = abs(float(residual))
    if rel is None:
        rel = a / max(1.0, max((abs(v) for v in terms.values()), default=0.0))
    value = rel if criterion == "relative" else a
    return IdentityResult(identity, terms, a, float(rel), base_tol, criterion, bool(value <= base_tol))


# ---------------------------------------------------------------------------
# identity computations


def first_order_terms(S, w, region: Region, rule: QuadratureRule) -> dict[str, float]:
    """The three integrals of the first-order virtual work balance."""
    body = integrate_top_form(body_force(S).act(w), region, rule)
    sigma = traction(S)
    surface = sum(integrate_face_form(sigma.act(w), face, rule) for face in boundary_faces(region))
    internal = integrate_top_form(S.act(prolong_field(w, 1)), region, rule)
    return {"body": body, "surface": surface, "internal": internal}


def nonholonomic_first_terms(Y: NonHolonomicStress, A: JetField, region: Region,
                             rule: QuadratureRule) -> dict[str, float]:
    """``int Y(j^1 A)``, ``sum_F int Z(A)`` and ``int div Y(A)`` for a section A of J^1 U."""
    from .stress import flatten_jet

    flat = flatten_jet(A)
    interior = integrate_top_form(nh_power(Y, A), region, rule)
    Z = nh_traction(Y)
    boundary = sum(integrate_face_form(Z.act(flat), face, rule) for face in boundary_faces(region))
    div = integrate_top_form(nh_divergence(Y).act(flat), region, rule)
    return {"interior": interior, "boundary": boundary, "divergence": div}


def _restrict_section(u, face):
    return [f.restrict(face.axis, face.value) for f in u]


def boundary_terms(Y: NonHolonomicStress, u, region: Region, rule: QuadratureRule, chart: str = "ambient"):
    """Face integrals of ``div Z(u)`` and the edge integrals of ``p_sigma(Z)(u)``.

    Returns ``(face_divergence_sum, edges)``, where ``edges`` maps each
    ordered ``(face, edge)`` pair to its signed integral; the key of an entry is
    ``(face.axis, face.side, edge.key)``.
    """
    Z = nh_traction(Y)
    ju = prolong_field(u, 1)
    total = 0.0
    edges: dict[tuple, float] = {}
    for face in boundary_faces(region):
        bs = boundary_divergence(Z, face, chart)
        total += face.induced_sign * integrate_top_form_on_chart(bs.divergence.act(ju.restrict(face)), face, rule)
        uf = _restrict_section(u, face)
        for edge in face.edges:
            value = face.induced_sign * integrate_face_form(bs.traction.act(uf), edge.chart_face, rule)
            edges[(face.axis, face.side, edge.key)] = value
    return total, edges


def integrate_top_form_on_chart(omega, face, rule: QuadratureRule) -> float:
    """Integral of a top-degree form on a face chart, without the face sign."""
    pts, wts = rule.box(face.chart)
    return float(np.dot(wts, omega.coefficient._eval(pts)))


def terminal_terms(Y: NonHolonomicStress, u, region: Region, rule: QuadratureRule,
                   chart: str = "ambient") -> tuple[dict[str, float], dict[tuple, float]]:
    """The four integrals of the second-order balance, plus the edge contributions."""
    ju = prolong_field(u, 1)
    interior = integrate_top_form(nh_power(Y, ju), region, rule)
    ddiv = integrate_top_form(double_divergence(Y).act(u), region, rule)
    bdiv, edges = boundary_terms(Y, u, region, rule, chart)
    div_traction = traction(over_base(nh_divergence(Y)))
    tdiv = sum(integrate_face_form(div_traction.act(u), face, rule) for face in boundary_faces(region))
    terms = {"interior": interior, "double_divergence": ddiv,
             "boundary_divergence": bdiv, "divergence_traction": tdiv}
    return terms, edges


def edge_summary(edges: dict[tuple, float]) -> dict[str, float]:
    by_edge: dict[frozenset, float] = defaultdict(float)
    by_face: dict[tuple, float] = defaultdict(float)
    for (axis, side, key), v in edges.items():
        by_edge[key] += v
        by_face[(axis, side)] += v
    return {
        "edge_sum": float(sum(edges.values())),
        "max_shared_edge": max((abs(v) for v in by_edge.values()), default=0.0),
        "max_single_face": max((abs(v) for v in by_face.values()), default=0.0),
    }


# ---------------------------------------------------------------------------
# verification entry points


def _report(sc: Scenario, rows, start: float) -> ResidualReport:
    return ResidualReport(sc.name, sc.mode, rows, sc.fd, time.perf_counter() - start)


def verify_first_order(sc: Scenario, points: int = 100) -> ResidualReport:
    if sc.mode != "first_order":
        raise ScenarioError(f"scenario {sc.name} has mode {sc.mode}, expected first_order")
    start = time.perf_counter()
    S, w = _first_order_inputs(sc)
    terms = first_order_terms(S, w, sc.region, sc.rule)
    rows = [make_result("virtual_work", terms, terms["body"] + terms["surface"] - terms["internal"], sc)]

    rng = np.random.default_rng(0 if sc.seed is None else sc.seed)
    pts = sc.region.sample(rng, points)
    d_sigma_w, power, div = divergence_terms(S, w, pts)
    res = np.abs(d_sigma_w - power - div)
    scale = np.maximum(1.0, np.max(np.abs([d_sigma_w, power, div]), axis=0))
    rows.append(make_result(
        "divergence_definition",
        {"points": points, "max_abs_term": float(np.max(scale))},
        float(np.max(res)), sc, rel=float(np.max(res / scale)),
    ))
    return _report(sc, rows, start)


def _edge_row(sc, edges):
    summary = edge_summary(edges)
    residual = max(abs(summary["edge_sum"]), summary["max_shared_edge"])
    return make_result("edge_cancellation", summary, residual, sc)


def verify_second_order(sc: Scenario) -> ResidualReport:
    if sc.mode == "nonholonomic":
        return verify_nonholonomic(sc)
    if sc.mode != "second_order":
        raise ScenarioError(f"scenario {sc.name} has mode {sc.mode}, expected second_order")
    start = time.perf_counter()
    Y, high, fields = _nonholonomic_inputs(sc)
    u = _section(sc, fields)
    region, rule = sc.region, sc.rule
    ju = prolong_field(u, 1)

    first = nonholonomic_first_terms(Y, ju, region, rule)
    rows = [make_result("nonholonomic_first", first,
                        first["interior"] - (first["boundary"] - first["divergence"]), sc)]
    terms, edges = terminal_terms(Y, u, region, rule, sc.boundary_chart)
    residual = terms["interior"] - (terms["double_divergence"] - terms["boundary_divergence"]
                                    - terms["divergence_traction"])
    rows.append(make_result("terminal", terms, residual, sc))
    rows.append(_edge_row(sc, edges))
    if high is not None:
        second = integrate_top_form(high.power(u), region, rule)
        rows.append(make_result("lift_consistency", {"second_order": second, "nonholonomic": terms["interior"]},
                                second - terms["interior"], sc))
    return _report(sc, rows, start)


def verify_nonholonomic(sc: Scenario) -> ResidualReport:
    """First boundary identity for an arbitrary, typically non-holonomic, section A of J^1 U."""
    if sc.mode != "nonholonomic":
        raise ScenarioError(f"scenario {sc.name} has mode {sc.mode}, expected nonholonomic")
    start = time.perf_counter()
    Y, _, fields = _nonholonomic_inputs(sc)
    raw = sc.fields.get("jet_section", {})
    A0 = fields.array(raw.get("A0"), (sc.d,), "section", "A0")
    A1 = fields.array(raw.get("A1"), (sc.d, sc.n), "section", "A1")
    A = jet_section(A0, A1)
    terms = nonholonomic_first_terms(Y, A, sc.region, sc.rule)
    pts, _ = sc.rule.box(sc.region)
    # size of the departure from holonomicity over the quadrature nodes
    gap12 = max(float(np.max(np.abs(A.value(a).diff(i)._eval(pts) - A.first(a, i)._eval(pts))))
                for a in range(sc.d) for i in range(sc.n))
    asym = max((float(np.max(np.abs(A.first(a, i).diff(j)._eval(pts) - A.first(a, j).diff(i)._eval(pts))))
                for a in range(sc.d) for i in range(sc.n) for j in range(sc.n) if i != j), default=0.0)
    row = make_result("nonholonomic_first", terms,
                      terms["interior"] - (terms["boundary"] - terms["divergence"]), sc)
    row.terms.update({"max_b1_minus_b2": gap12, "max_b3_asymmetry": asym})
    return _report(sc, [row], start)


def verify_edge_cancellation(sc: Scenario) -> ResidualReport:
    if sc.mode not in ("edge_cancel", "second_order"):
        raise ScenarioError(f"scenario {sc.name} has mode {sc.mode}, expected edge_cancel")
    start = time.perf_counter()
    Y, _, fields = _nonholonomic_inputs(sc)
    u = _section(sc, fields)
    _, edges = boundary_terms(Y, u, sc.region, sc.rule, sc.boundary_chart)
    return _report(sc, [_edge_row(sc, edges)], start)


def verify(sc: Scenario) -> ResidualReport:
    return {
        "first_order": verify_first_order,
        "second_order": verify_second_order,
        "nonholonomic": verify_nonholonomic,
        "edge_cancel": verify_edge_cancellation,
    }[sc.mode](sc)
