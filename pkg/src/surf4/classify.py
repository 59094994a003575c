"""Point types and grid-sampled surface verdicts."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .directions import is_flat
from .ellipse import CurvatureEllipse, curvature_ellipse
from .errors import InvalidSpec, Surf4Error
from .forms import FundamentalData, InvariantSet, PointData, default_tau, point_data
from .indicatrix import IndicatrixConic, axes_for, build_indicatrix
from .jets import ParamPoint, SurfaceChart, evaluate_jet

POINT_KINDS = ("flat", "elliptic", "parabolic", "hyperbolic")


@dataclass(frozen=True)
class PointType:
    kind: str
    k: float
    kappa: float
    tau: float


def classify_point(inv: InvariantSet, fd: FundamentalData, tau: float | None = None) -> PointType:
    t = default_tau(inv) if tau is None else tau
    if abs(inv.k) <= t and abs(inv.kappa) <= t and is_flat(fd, t):
        kind = "flat"
    elif inv.k > t:
        kind = "elliptic"
    elif inv.k < -t:
        kind = "hyperbolic"
    else:
        kind = "parabolic"
    return PointType(kind, inv.k, inv.kappa, t)


@dataclass(frozen=True)
class GridSpec:
    u_min: float
    u_max: float
    u_count: int
    v_min: float
    v_max: float
    v_count: int

    def __post_init__(self):
        if self.u_count < 2 or self.v_count < 2:
            raise InvalidSpec("grid counts must be at least 2")
        if not (self.u_max > self.u_min and self.v_max > self.v_min):
            raise InvalidSpec("grid ranges must be increasing")

    @staticmethod
    def parse(text: str) -> "GridSpec":
        """Parse ``u0:u1:nu,v0:v1:nv``."""
        try:
            us, vs = text.split(",")
            u0, u1, nu = us.split(":")
            v0, v1, nv = vs.split(":")
            return GridSpec(float(u0), float(u1), int(nu), float(v0), float(v1), int(nv))
        except ValueError as exc:
            raise InvalidSpec(f"bad grid {text!r}: expected u0:u1:nu,v0:v1:nv") from exc

    def points(self) -> list[ParamPoint]:
        """Row-major: u outer, v inner."""
        us = np.linspace(self.u_min, self.u_max, self.u_count)
        vs = np.linspace(self.v_min, self.v_max, self.v_count)
        return [ParamPoint(float(u), float(v)) for u in us for v in vs]

    def as_dict(self) -> dict:
        return {"u": [self.u_min, self.u_max, self.u_count], "v": [self.v_min, self.v_max, self.v_count]}


@dataclass(frozen=True)
class PointAnalysis:
    point: ParamPoint
    data: PointData
    point_type: PointType
    indicatrix: IndicatrixConic
    ellipse: CurvatureEllipse

    @property
    def inv(self) -> InvariantSet:
        return self.data.inv

    @property
    def fd(self) -> FundamentalData:
        return self.data.fd


def analyze_point(chart: SurfaceChart, p: ParamPoint, tau: float | None = None) -> PointAnalysis:
    jet = evaluate_jet(chart, p)
    data = point_data(jet)
    pt = classify_point(data.inv, data.fd, tau)
    if pt.kind == "flat":
        conic = build_indicatrix(data.inv, (), data.fd, tau=pt.tau, allow_flat=True)
    else:
        conic = build_indicatrix(data.inv, axes_for(data.fd), data.fd, tau=pt.tau)
    ell = curvature_ellipse(jet, data.frame, data.dec, data.fd)
    return PointAnalysis(p, data, pt, conic, ell)


def thread_cap() -> int:
    try:
        n = int(os.environ.get("SURF4_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class Sample:
    point: ParamPoint
    analysis: Optional[PointAnalysis]
    error: Optional[Surf4Error]


def sweep(chart: SurfaceChart, points, tau: float | None = None) -> list[Sample]:
    """Analyze every point; results come back in input order whatever the thread count."""

    def one(p):
        try:
            return Sample(p, analyze_point(chart, p, tau), None)
        except Surf4Error as exc:
            return Sample(p, None, exc)

    n = thread_cap()
    if n == 1:
        return [one(p) for p in points]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(one, points))


@dataclass
class SurfaceVerdict:
    minimal: str
    flat_normal_connection: str
    super_conformal: str
    flat_points_only: str
    sample_grid: GridSpec
    counterexample_points: dict[str, list[ParamPoint]]
    flat_points: list[ParamPoint]
    records: list[dict] = field(repr=False, default_factory=list)
    tau: Optional[float] = None

    def as_dict(self) -> dict:
        pts = lambda ps: [[p.u, p.v] for p in ps]
        return {
            "schema": 1,
            "minimal": self.minimal,
            "flat_normal_connection": self.flat_normal_connection,
            "super_conformal": self.super_conformal,
            "flat_points_only": self.flat_points_only,
            "developable": developable_check(self),
            "grid": self.sample_grid.as_dict(),
            "tau": self.tau,
            "counterexamples": {k: pts(v) for k, v in self.counterexample_points.items()},
            "flat_points": pts(self.flat_points),
        }


class EvaluationFailed(Surf4Error):
    def __init__(self, point: ParamPoint, cause: Surf4Error):
        super().__init__(f"evaluation failed at ({point.u}, {point.v}): {cause}")
        self.point = point
        self.cause = cause


def _tri(holds: list[bool], n_flat: int) -> str:
    if not holds:
        return "no"
    if all(holds):
        return "yes" if n_flat == 0 else "mixed"
    if not any(holds):
        return "no"
    return "mixed"


def classify_surface(chart: SurfaceChart, grid: GridSpec, tau: float | None = None) -> SurfaceVerdict:
    """Exhaustive grid evaluation of the surface-level predicates.

    Predicates are decided on non-flat points with threshold 10 * tau; flat
    points never satisfy a predicate on their own but turn an otherwise
    unanimous "yes" into "mixed" and are listed separately.
    """
    samples = sweep(chart, grid.points(), tau)
    for s in samples:
        if s.error is not None:
            raise EvaluationFailed(s.point, s.error)
    flat, records = [], []
    fails = {"minimal": [], "flat_normal_connection": [], "super_conformal": []}
    holds = {key: [] for key in fails}
    for s in samples:
        a = s.analysis
        inv = a.inv
        t = a.point_type.tau
        t2 = 10.0 * t
        rec = {"u": s.point.u, "v": s.point.v, "k": inv.k, "kappa": inv.kappa, "K": inv.K,
               "tau": t, "kind": a.point_type.kind}
        records.append(rec)
        if a.point_type.kind == "flat":
            flat.append(s.point)
            continue
        checks = {
            "minimal": inv.kappa ** 2 - inv.k <= t2,
            "flat_normal_connection": abs(inv.kappa) <= t2,
            "super_conformal": a.ellipse.kind == "circle",
        }
        for key, ok in checks.items():
            holds[key].append(ok)
            if not ok:
                fails[key].append(s.point)
    nflat = len(flat)
    verdict = {key: _tri(holds[key], nflat) for key in holds}
    counter = {key: fails[key] + (flat if verdict[key] != "yes" and holds[key] else []) for key in fails}
    if nflat == len(samples):
        fpo = "yes"
    elif nflat == 0:
        fpo = "no"
    else:
        fpo = "mixed"
    counter["flat_points_only"] = [s.point for s in samples if s.analysis.point_type.kind != "flat"] \
        if fpo != "yes" else []
    return SurfaceVerdict(verdict["minimal"], verdict["flat_normal_connection"],
                          verdict["super_conformal"], fpo, grid, counter, flat, records, tau)


def developable_check(verdict: SurfaceVerdict) -> str:
    """Necessary condition only: k, kappa and K all vanish at every grid point."""
    flags = [max(abs(r["k"]), abs(r["kappa"]), abs(r["K"])) <= r["tau"] for r in verdict.records]
    if not flags:
        return "no"
    if all(flags):
        return "yes"
    return "mixed" if any(flags) else "no"
