"""Tangent directions: normal curvature, conjugacy, asymptotic and principal
tangents, the Euler formula and the principal-frame quantities nu1, nu2,
lambda, mu."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import FlatPoint, UmbilicLike, ZeroDirection
from .forms import DerivativeDecomposition, FundamentalData, sigma_normal
from .jets import Jet2

UMBILIC_TOL = 1e-6
DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class TangentDirection:
    """X = alpha z_u + beta z_v, stored with I(alpha, beta) = 1 when built via :meth:`unit`."""

    alpha: float
    beta: float

    @staticmethod
    def unit(alpha: float, beta: float, fd: FundamentalData) -> "TangentDirection":
        n2 = first_form(fd, (alpha, beta), (alpha, beta))
        if n2 <= 0.0 or not math.isfinite(n2):
            raise ZeroDirection("zero tangent direction")
        s = 1.0 / math.sqrt(n2)
        return TangentDirection(alpha * s, beta * s)

    def vec(self) -> np.ndarray:
        return np.array([self.alpha, self.beta])


def _ab(d):
    if isinstance(d, TangentDirection):
        return d.alpha, d.beta
    return float(d[0]), float(d[1])


def first_form(fd: FundamentalData, g1, g2) -> float:
    a1, b1 = _ab(g1)
    a2, b2 = _ab(g2)
    return fd.E * a1 * a2 + fd.F * (a1 * b2 + a2 * b1) + fd.G * b1 * b2


def second_form(fd: FundamentalData, g1, g2) -> float:
    a1, b1 = _ab(g1)
    a2, b2 = _ab(g2)
    return fd.L * a1 * a2 + fd.M * (a1 * b2 + a2 * b1) + fd.N * b1 * b2


def _check_nonzero(*dirs):
    for d in dirs:
        a, b = _ab(d)
        if a == 0.0 and b == 0.0:
            raise ZeroDirection("direction (0, 0)")


def flat_threshold(fd: FundamentalData) -> float:
    k = (fd.L * fd.N - fd.M ** 2) / fd.W ** 2
    kappa = (fd.E * fd.N + fd.G * fd.L - 2 * fd.F * fd.M) / (2 * fd.W ** 2)
    return 1e-7 * (1.0 + abs(k) + abs(kappa))


def is_flat(fd: FundamentalData, tau: float | None = None) -> bool:
    t = flat_threshold(fd) if tau is None else tau
    return max(abs(fd.L), abs(fd.M), abs(fd.N)) <= t


def normal_curvature(fd: FundamentalData, g) -> float:
    _check_nonzero(g)
    return second_form(fd, g, g) / first_form(fd, g, g)


def is_conjugate(fd: FundamentalData, g1, g2, tol: float = 1e-8, allow_flat: bool = False) -> bool:
    """II(g1, g2) = 0 up to ``tol * (|L| + 2|M| + |N|) * |g1| |g2|``.

    At flat points every pair is trivially conjugate; that is reported as
    :class:`FlatPoint` unless ``allow_flat`` is set.
    """
    _check_nonzero(g1, g2)
    if is_flat(fd):
        if allow_flat:
            return True
        raise FlatPoint("conjugacy is degenerate at a flat point")
    scale = (abs(fd.L) + 2 * abs(fd.M) + abs(fd.N)) * math.hypot(*_ab(g1)) * math.hypot(*_ab(g2))
    return abs(second_form(fd, g1, g2)) <= tol * scale


def _sym_eig(a: float, b: float, c: float):
    """Eigenpairs of [[a, b], [b, c]], eigenvalues descending, closed form."""
    mean = 0.5 * (a + c)
    half = math.hypot(0.5 * (a - c), b)
    lam1, lam2 = mean + half, mean - half
    if half == 0.0:
        return lam1, lam2, np.array([1.0, 0.0]), np.array([0.0, 1.0])
    # eigenvector for lam1, computed from the better-conditioned row
    if a >= c:
        v1 = np.array([a - c + 2 * half, 2 * b])
    else:
        v1 = np.array([2 * b, c - a + 2 * half])
    v1 = v1 / np.linalg.norm(v1)
    v2 = np.array([-v1[1], v1[0]])
    return lam1, lam2, v1, v2


def _metric_factor(fd: FundamentalData):
    """Upper-triangular R with I = R^T R."""
    r11 = math.sqrt(fd.E)
    r12 = fd.F / r11
    r22 = fd.W / r11
    return np.array([[r11, r12], [0.0, r22]])


def asymptotic_directions(fd: FundamentalData) -> list[TangentDirection]:
    """Real self-conjugate tangents: 2 at hyperbolic, 1 at parabolic, 0 at elliptic points."""
    if is_flat(fd):
        raise FlatPoint("every tangent is asymptotic at a flat point")
    lam1, lam2, v1, v2 = _sym_eig(fd.L, fd.M, fd.N)
    scale = abs(lam1) + abs(lam2)
    if min(abs(lam1), abs(lam2)) <= DEDUP_TOL * scale:
        null = v2 if abs(lam2) <= abs(lam1) else v1
        return [TangentDirection.unit(null[0], null[1], fd)]
    if lam1 * lam2 > 0:
        return []
    p, q = math.sqrt(abs(lam2)), math.sqrt(abs(lam1))
    out = []
    for s in (1.0, -1.0):
        d = p * v1 + s * q * v2
        out.append(TangentDirection.unit(d[0], d[1], fd))
    return out


def principal_curvatures_and_directions(fd: FundamentalData):
    """(nu_hi, nu_lo, x_dir, y_dir): generalized eigenpairs of II against I.

    ``x_dir`` carries nu_hi; ``y_dir`` is I-orthonormal to it with the
    orientation of (z_u, z_v). Directions are returned as (alpha, beta) arrays.
    """
    R = _metric_factor(fd)
    Rinv = np.linalg.inv(R)
    S = Rinv.T @ fd.second() @ Rinv
    lam1, lam2, w1, w2 = _sym_eig(S[0, 0], 0.5 * (S[0, 1] + S[1, 0]), S[1, 1])
    d1 = Rinv @ w1
    d2 = Rinv @ w2
    if d1[0] * d2[1] - d1[1] * d2[0] < 0:
        d2 = -d2
    return lam1, lam2, d1, d2


def principal_directions(fd: FundamentalData, tol: float = UMBILIC_TOL) -> tuple[TangentDirection, TangentDirection]:
    lam1, lam2, d1, d2 = principal_curvatures_and_directions(fd)
    if lam1 - lam2 <= tol * (abs(lam1) + abs(lam2)):
        raise UmbilicLike("principal-tangent quadratic vanishes identically")
    return (TangentDirection.unit(d1[0], d1[1], fd), TangentDirection.unit(d2[0], d2[1], fd))


def principal_quadratic(fd: FundamentalData) -> tuple[float, float, float]:
    """Coefficients of the principal-tangent equation in alpha^2, alpha beta, beta^2."""
    E, F, G, L, M, N = fd.E, fd.F, fd.G, fd.L, fd.M, fd.N
    return E * M - F * L, E * N - G * L, F * N - G * M


def direction_at_angle(fd: FundamentalData, phi: float) -> TangentDirection:
    x, y = principal_directions(fd)
    c, s = math.cos(phi), math.sin(phi)
    return TangentDirection(c * x.alpha + s * y.alpha, c * x.beta + s * y.beta)


def euler_check(fd: FundamentalData, phi: float) -> float:
    """Normal curvature of the tangent at angle ``phi`` from the first principal direction."""
    return normal_curvature(fd, direction_at_angle(fd, phi))


@dataclass(frozen=True)
class PrincipalFrameData:
    nu1: float
    nu2: float
    lam: float
    mu: float
    b: np.ndarray
    l: np.ndarray
    x: TangentDirection
    y: TangentDirection
    residual: float


def principal_frame_data(jet: Jet2, fd: FundamentalData, dec: DerivativeDecomposition,
                         frame=None) -> PrincipalFrameData:
    """Read nu1, nu2, lambda, mu off sigma in the principal frame {x, y, b, l}.

    ``b`` points along sigma(x, x) (falling back to sigma(y, y)) with
    <sigma(x, x), b> >= 0; ``l`` completes a positively oriented frame.
    Vectors b, l are returned in normal-frame coordinates unless ``frame``
    (an :class:`AdaptedFrame`) is given, in which case they are ambient.
    """
    if is_flat(fd):
        raise FlatPoint("principal frame undefined at a flat point")
    x, y = principal_directions(fd)
    sxx = sigma_normal(dec, x.vec(), x.vec())
    syy = sigma_normal(dec, y.vec(), y.vec())
    sxy = sigma_normal(dec, x.vec(), y.vec())
    ref = sxx if np.linalg.norm(sxx) >= np.linalg.norm(syy) else syy
    nref = np.linalg.norm(ref)
    if nref == 0.0:
        raise FlatPoint("sigma vanishes on both principal directions")
    b = ref / nref
    if sxx @ b < 0 or (sxx @ b == 0 and syy @ b < 0):
        b = -b
    # (x, y) has the orientation of (z_u, z_v); the normal pair must keep (e1, e2)'s
    l = np.array([-b[1], b[0]])
    nu1, nu2 = float(sxx @ b), float(syy @ b)
    lam, mu = float(sxy @ b), float(sxy @ l)
    residual = max(np.linalg.norm(sxx - nu1 * b), np.linalg.norm(syy - nu2 * b),
                   np.linalg.norm(sxy - lam * b - mu * l))
    if frame is not None:
        b, l = frame.normal_vector(b), frame.normal_vector(l)
    return PrincipalFrameData(nu1, nu2, lam, mu, b, l, x, y, float(residual))
