"""Parametric charts z(u, v) in R^4 and their 2-jets.

A :class:`SurfaceChart` wraps a position map and, optionally, an analytic
jet map. :func:`evaluate_jet` returns the value and first/second partials at
a parameter point, either analytically or by central finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DegenerateChart, DomainViolation, InvalidSpec


@dataclass(frozen=True)
class ParamPoint:
    u: float
    v: float


@dataclass(frozen=True)
class Jet2:
    z: np.ndarray
    z_u: np.ndarray
    z_v: np.ndarray
    z_uu: np.ndarray
    z_uv: np.ndarray
    z_vv: np.ndarray

    def second(self, i: int, j: int) -> np.ndarray:
        """z_ij with 1-based indices (1 = u, 2 = v)."""
        if i == 1 and j == 1:
            return self.z_uu
        if i == 2 and j == 2:
            return self.z_vv
        return self.z_uv

    @property
    def W(self) -> float:
        E = float(self.z_u @ self.z_u)
        F = float(self.z_u @ self.z_v)
        G = float(self.z_v @ self.z_v)
        return math.sqrt(max(E * G - F * F, 0.0))


def jet_from_arrays(z, z_u, z_v, z_uu, z_uv, z_vv) -> Jet2:
    return Jet2(*(np.asarray(a, dtype=float).reshape(4) for a in (z, z_u, z_v, z_uu, z_uv, z_vv)))


Position = Callable[[float, float], np.ndarray]
JetFn = Callable[[float, float], Jet2]


def default_fd_steps(domain) -> tuple[float, float, float, float]:
    """(h1_u, h1_v, h2_u, h2_v): first-derivative and second-derivative steps per axis."""
    u0, u1, v0, v1 = domain
    eu, ev = u1 - u0, v1 - v0
    return (1e-5 * max(1.0, eu), 1e-5 * max(1.0, ev),
            5e-4 * max(1.0, eu), 5e-4 * max(1.0, ev))


@dataclass(frozen=True)
class SurfaceChart:
    """A chart over the rectangle ``domain = (u0, u1, v0, v1)``.

    ``position`` is always required (finite differences use it). ``analytic``
    may be None, in which case only ``jet_mode="fd"`` is available.
    """

    name: str
    domain: tuple[float, float, float, float]
    position: Position
    analytic: Optional[JetFn] = None
    jet_mode: str = "analytic"
    fd_steps: Optional[tuple[float, float, float, float]] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        u0, u1, v0, v1 = self.domain
        if not (u1 > u0 and v1 > v0):
            raise InvalidSpec(f"empty chart domain {self.domain}")
        if self.jet_mode not in ("analytic", "fd"):
            raise InvalidSpec(f"jet_mode must be 'analytic' or 'fd', got {self.jet_mode!r}")
        if self.jet_mode == "analytic" and self.analytic is None:
            raise InvalidSpec(f"chart {self.name!r} has no analytic jets; use jet_mode 'fd'")
        if self.fd_steps is None:
            object.__setattr__(self, "fd_steps", default_fd_steps(self.domain))
        h1u, h1v, h2u, h2v = self.fd_steps
        eu, ev = u1 - u0, v1 - v0
        if min(self.fd_steps) <= 0 or max(h1u, h2u) >= 0.01 * eu or max(h1v, h2v) >= 0.01 * ev:
            raise InvalidSpec("fd steps must be positive and below 1% of the domain extent")

    def with_mode(self, jet_mode: str, fd_steps=None) -> "SurfaceChart":
        return replace(self, jet_mode=jet_mode, fd_steps=fd_steps)


def regularity_threshold(z_u: np.ndarray, z_v: np.ndarray) -> float:
    return 1e-10 * (float(np.linalg.norm(z_u)) * float(np.linalg.norm(z_v)) + 1.0)


def check_regular(jet: Jet2) -> None:
    if jet.W <= regularity_threshold(jet.z_u, jet.z_v):
        raise DegenerateChart(f"z_u and z_v are dependent (W = {jet.W:.3e})")


def evaluate_jet(chart: SurfaceChart, p: ParamPoint, check: bool = True) -> Jet2:
    u, v = float(p.u), float(p.v)
    u0, u1, v0, v1 = chart.domain
    if not (math.isfinite(u) and math.isfinite(v)):
        raise DomainViolation(f"non-finite parameter point ({u}, {v})")
    if chart.jet_mode == "fd":
        _, _, h2u, h2v = chart.fd_steps
        if not (u0 + 2 * h2u <= u <= u1 - 2 * h2u and v0 + 2 * h2v <= v <= v1 - 2 * h2v):
            raise DomainViolation(
                f"({u}, {v}) is within 2*h2 of the boundary of {chart.domain}")
        jet = fd_jet(chart.position, u, v, chart.fd_steps)
    else:
        if not (u0 <= u <= u1 and v0 <= v <= v1):
            raise DomainViolation(f"({u}, {v}) outside chart domain {chart.domain}")
        jet = chart.analytic(u, v)
    if check:
        check_regular(jet)
    return jet


def fd_jet(position: Position, u: float, v: float, steps) -> Jet2:
    """Central-difference 2-jet.

    First partials use the symmetric 2-point stencil (step h1), pure second
    partials the symmetric 3-point stencil and the mixed partial the 4-point
    cross stencil (step h2).
    """
    h1u, h1v, h2u, h2v = steps
    P = lambda a, b: np.asarray(position(a, b), dtype=float)
    z = P(u, v)
    z_u = (P(u + h1u, v) - P(u - h1u, v)) / (2 * h1u)
    z_v = (P(u, v + h1v) - P(u, v - h1v)) / (2 * h1v)
    z_uu = (P(u + h2u, v) - 2 * z + P(u - h2u, v)) / (h2u * h2u)
    z_vv = (P(u, v + h2v) - 2 * z + P(u, v - h2v)) / (h2v * h2v)
    z_uv = (P(u + h2u, v + h2v) - P(u + h2u, v - h2v)
            - P(u - h2u, v + h2v) + P(u - h2u, v - h2v)) / (4 * h2u * h2v)
    return Jet2(z, z_u, z_v, z_uu, z_uv, z_vv)


def _det3(m: np.ndarray) -> float:
    return float(m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                 - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                 + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))


def wedge4(a, b, c) -> np.ndarray:
    """Generalized cross product: the d with <d, x> = det[x, a, b, c] for all x."""
    m = np.array([a, b, c], dtype=float)
    d = np.empty(4)
    for i in range(4):
        d[i] = (-1) ** i * _det3(np.delete(m, i, axis=1))
    return d


def det4(a, b, c, d) -> float:
    return float(np.linalg.det(np.array([a, b, c, d], dtype=float)))


# ---------------------------------------------------------------- transforms

def rigid_motion(chart: SurfaceChart, R, t=None) -> SurfaceChart:
    """Chart of R z + t (R orthogonal; det R = -1 gives a reflection)."""
    R = np.asarray(R, dtype=float)
    t = np.zeros(4) if t is None else np.asarray(t, dtype=float)
    pos = lambda u, v: R @ np.asarray(chart.position(u, v), dtype=float) + t
    analytic = None
    if chart.analytic is not None:
        def analytic(u, v):
            j = chart.analytic(u, v)
            return Jet2(R @ j.z + t, R @ j.z_u, R @ j.z_v, R @ j.z_uu, R @ j.z_uv, R @ j.z_vv)
    return replace(chart, name=f"{chart.name}/moved", position=pos, analytic=analytic)


def affine_reparameterize(chart: SurfaceChart, A, c) -> SurfaceChart:
    """Chart s,t -> z(A @ (s, t) + c).

    The new domain is the bounding box of the preimage of the old one; points
    mapping outside the original domain raise DomainViolation on evaluation.
    """
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    if abs(np.linalg.det(A)) < 1e-12:
        raise InvalidSpec("singular reparameterization")
    Ainv = np.linalg.inv(A)
    u0, u1, v0, v1 = chart.domain
    corners = np.array([Ainv @ (np.array([a, b]) - c) for a in (u0, u1) for b in (v0, v1)])
    dom = (corners[:, 0].min(), corners[:, 0].max(), corners[:, 1].min(), corners[:, 1].max())
    (a, b), (d, e) = A

    def fwd(s, t):
        return a * s + b * t + c[0], d * s + e * t + c[1]

    pos = lambda s, t: chart.position(*fwd(s, t))
    analytic = None
    if chart.analytic is not None:
        def analytic(s, t):
            u, v = fwd(s, t)
            uu0, uu1, vv0, vv1 = chart.domain
            if not (uu0 <= u <= uu1 and vv0 <= v <= vv1):
                raise DomainViolation(f"reparameterized point maps to ({u}, {v}) outside {chart.domain}")
            j = chart.analytic(u, v)
            return Jet2(
                j.z,
                a * j.z_u + d * j.z_v,
                b * j.z_u + e * j.z_v,
                a * a * j.z_uu + 2 * a * d * j.z_uv + d * d * j.z_vv,
                a * b * j.z_uu + (a * e + b * d) * j.z_uv + d * e * j.z_vv,
                b * b * j.z_uu + 2 * b * e * j.z_uv + e * e * j.z_vv,
            )
    return SurfaceChart(f"{chart.name}/reparam", dom, pos, analytic, chart.jet_mode
                        if chart.analytic is not None else "fd")


def preimage(A, c, p: ParamPoint) -> ParamPoint:
    """Parameter point of the reparameterized chart that maps onto ``p``."""
    s, t = np.linalg.solve(np.asarray(A, dtype=float), np.array([p.u, p.v]) - np.asarray(c, dtype=float))
    return ParamPoint(float(s), float(t))
