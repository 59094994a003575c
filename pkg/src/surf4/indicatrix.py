"""The tangent indicatrix nu' X^2 + nu'' Y^2 = eps, its kind and axes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .directions import (TangentDirection, first_form, is_flat, principal_directions)
from .errors import FlatPoint, UmbilicLike
from .forms import FundamentalData, InvariantSet, default_tau, orthonormal_tangent_coeffs

TOL_C = 1e-6

KINDS = ("ellipse", "circle", "hyperbola", "rectangular_hyperbola", "parallel_lines", "undefined_flat")


@dataclass(frozen=True)
class IndicatrixConic:
    nu_hi: float
    nu_lo: float
    kind: str
    axis_lengths: Optional[tuple[float, float]]
    principal_axes: tuple[TangentDirection, TangentDirection] | None
    epsilon_branches: tuple[int, ...]
    margin: float
    line_separation: Optional[float] = None

    def implicit(self, X: float, Y: float) -> float:
        """nu' X^2 + nu'' Y^2 in principal-axis coordinates."""
        return self.nu_hi * X * X + self.nu_lo * Y * Y


def axes_for(fd: FundamentalData) -> tuple[TangentDirection, TangentDirection]:
    """Principal directions, or the orthonormalized parameter frame at umbilic-like points."""
    try:
        return principal_directions(fd)
    except UmbilicLike:
        ax, ay = orthonormal_tangent_coeffs(fd)
        return TangentDirection(*ax), TangentDirection(*ay)


def build_indicatrix(inv: InvariantSet, principal, fd: FundamentalData | None = None,
                     tol_c: float = TOL_C, tau: float | None = None,
                     allow_flat: bool = False) -> IndicatrixConic:
    """Classify the indicatrix from the principal normal curvatures.

    Flatness is decided from L, M, N when ``fd`` is given, otherwise from
    k and kappa. A flat point raises :class:`FlatPoint`, or with
    ``allow_flat`` yields a conic of kind ``undefined_flat``.
    """
    tau = default_tau(inv) if tau is None else tau
    nh, nl = inv.nu_hi, inv.nu_lo
    flat = is_flat(fd, tau) if fd is not None else (abs(inv.k) <= tau and abs(inv.kappa) <= tau)
    if flat:
        if allow_flat:
            return IndicatrixConic(nh, nl, "undefined_flat", None, None, (), 0.0)
        raise FlatPoint("indicatrix undefined at a flat point")
    scale = abs(nh) + abs(nl)
    principal = tuple(principal)
    if inv.k > tau:
        margin = abs(nh - nl) / scale
        kind = "circle" if margin <= tol_c else "ellipse"
        eps = (1 if nh > 0 else -1,)
        axes = (2.0 / math.sqrt(abs(nh)), 2.0 / math.sqrt(abs(nl)))
        return IndicatrixConic(nh, nl, kind, axes, principal, eps, margin)
    if inv.k < -tau:
        margin = abs(nh + nl) / scale
        kind = "rectangular_hyperbola" if margin <= tol_c else "hyperbola"
        axes = (2.0 / math.sqrt(abs(nh)), 2.0 / math.sqrt(abs(nl)))
        return IndicatrixConic(nh, nl, kind, axes, principal, (1, -1), margin)
    # parabolic: two lines parallel to the principal direction of zero normal curvature
    nz = nh if abs(nh) >= abs(nl) else nl
    margin = abs(inv.k) / max(tau, 1e-300)
    eps = (1 if nz > 0 else -1,)
    return IndicatrixConic(nh, nl, "parallel_lines", None, principal, eps, margin,
                           line_separation=2.0 / math.sqrt(abs(nz)))


def principal_coords(fd: FundamentalData, conic: IndicatrixConic, g) -> np.ndarray:
    """Coordinates (X, Y) of a direction along the conic's (I-orthonormal) principal axes."""
    x, y = conic.principal_axes
    return np.array([first_form(fd, g, x), first_form(fd, g, y)])


def indicatrix_conjugate(conic: IndicatrixConic, g1, g2, fd: FundamentalData,
                         tol: float = 1e-8) -> bool:
    """Conjugacy of two diameters with respect to the central conic diag(nu', nu'')."""
    if conic.kind == "undefined_flat":
        raise FlatPoint("no indicatrix at a flat point")
    p1 = principal_coords(fd, conic, g1)
    p2 = principal_coords(fd, conic, g2)
    val = conic.nu_hi * p1[0] * p2[0] + conic.nu_lo * p1[1] * p2[1]
    scale = (abs(conic.nu_hi) + abs(conic.nu_lo)) * np.linalg.norm(p1) * np.linalg.norm(p2)
    return abs(val) <= tol * scale
