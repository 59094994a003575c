"""Ellipse of normal curvature: center H, conjugate generators, semi-axes,
degeneracy kind and the diagnostics built on them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotASegment
from .forms import (AdaptedFrame, DerivativeDecomposition, FundamentalData, InvariantSet,
                    orthonormal_tangent_coeffs, sigma_normal)
from .jets import Jet2, check_regular


@dataclass(frozen=True)
class CurvatureEllipse:
    center: np.ndarray
    u1: np.ndarray
    u2: np.ndarray
    a: float
    b: float
    kind: str
    segment_dir: Optional[np.ndarray]
    tau: float
    # normal-frame coordinates of center, u1, u2 (for plotting)
    center_n: np.ndarray
    u1_n: np.ndarray
    u2_n: np.ndarray

    @property
    def semi_axes(self) -> tuple[float, float]:
        return self.a, self.b

    def point(self, psi: float) -> np.ndarray:
        """sigma(v, v) for the unit tangent at angle psi from x."""
        return self.center + math.cos(2 * psi) * self.u1 + math.sin(2 * psi) * self.u2


def semi_axes(u1: np.ndarray, u2: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Semi-axes a >= b >= 0 of {cos t u1 + sin t u2} and the unit major direction.

    a^2, b^2 are the eigenvalues of the Gram matrix of (u1, u2); b is taken
    as |u1 x u2| / a so that near-segments are not polluted by a square root.
    """
    g11, g12, g22 = float(u1 @ u1), float(u1 @ u2), float(u2 @ u2)
    tr = g11 + g22
    half = math.hypot(0.5 * (g11 - g22), g12)
    a = math.sqrt(max(0.5 * tr + half, 0.0))
    area = abs(float(u1[0] * u2[1] - u1[1] * u2[0]))
    b = area / a if a > 0 else 0.0
    # major direction: dominant eigenvector of [u1 u2][u1 u2]^T in the normal plane
    P = np.outer(u1, u1) + np.outer(u2, u2)
    p, q, r = P[0, 0], P[0, 1], P[1, 1]
    if p >= r:
        d = np.array([p - r + 2 * math.hypot(0.5 * (p - r), q), 2 * q])
    else:
        d = np.array([2 * q, r - p + 2 * math.hypot(0.5 * (p - r), q)])
    nd = np.linalg.norm(d)
    d = d / nd if nd > 0 else np.array([1.0, 0.0])
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = -d
    return a, b, d


def classify_ellipse(a: float, b: float, tau: float) -> str:
    if a <= tau:
        return "point"
    if b <= tau:
        return "segment"
    if a - b <= tau * (a + b):
        return "circle"
    return "ellipse"


def curvature_ellipse(jet: Jet2, frame: AdaptedFrame, dec: DerivativeDecomposition,
                      fd: FundamentalData | None = None) -> CurvatureEllipse:
    check_regular(jet)
    if fd is None:
        E = float(jet.z_u @ jet.z_u)
        F = float(jet.z_u @ jet.z_v)
        G = float(jet.z_v @ jet.z_v)
        fd = FundamentalData(E, F, G, math.sqrt(E * G - F * F), 0.0, 0.0, 0.0)
    ax, ay = orthonormal_tangent_coeffs(fd)
    sxx = sigma_normal(dec, ax, ax)
    syy = sigma_normal(dec, ay, ay)
    sxy = sigma_normal(dec, ax, ay)
    h = 0.5 * (sxx + syy)
    u1 = 0.5 * (sxx - syy)
    u2 = sxy
    a, b, d = semi_axes(u1, u2)
    sig = max(np.linalg.norm(sxx), np.linalg.norm(syy), np.linalg.norm(sxy))
    tau = 1e-7 * (1.0 + sig)
    kind = classify_ellipse(a, b, tau)
    seg = frame.normal_vector(d) if kind == "segment" else None
    return CurvatureEllipse(frame.normal_vector(h), frame.normal_vector(u1), frame.normal_vector(u2),
                            a, b, kind, seg, tau, h, u1, u2)


def gauss_torsion_check(ell: CurvatureEllipse, inv: InvariantSet) -> float:
    """|kappa| - 2ab; vanishes identically in exact arithmetic."""
    return abs(inv.kappa) - 2.0 * ell.a * ell.b


@dataclass(frozen=True)
class SegmentDiagnostics:
    d: float
    full_length: float
    d_from_invariants: float
    collinear_with_H: bool
    orthogonal_to_H: bool
    length_convention: str = "d is the generator norm (half the segment length)"


def segment_diagnostics(ell: CurvatureEllipse, inv: InvariantSet, tol: float = 1e-6) -> SegmentDiagnostics:
    if ell.kind != "segment":
        raise NotASegment(f"curvature ellipse is a {ell.kind}, not a segment")
    H = inv.H
    hn = float(np.linalg.norm(H))
    if hn <= ell.tau:
        collinear, orthogonal = False, True
    else:
        cosang = float(ell.segment_dir @ H) / hn
        collinear = abs(abs(cosang) - 1.0) <= tol or math.sqrt(max(1 - cosang * cosang, 0.0)) <= tol
        orthogonal = abs(cosang) <= tol
    d_inv = math.sqrt(max(hn * hn - inv.K, 0.0))
    return SegmentDiagnostics(ell.a, 2.0 * ell.a, d_inv, collinear, orthogonal)


def is_superconformal(ell: CurvatureEllipse, tol: float | None = None) -> bool:
    t = ell.tau if tol is None else tol
    return classify_ellipse(ell.a, ell.b, t) == "circle"
