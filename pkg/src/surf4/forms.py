"""Adapted frame, first/second fundamental data, the Weingarten-type map and
the scalar invariants k, kappa, K at a point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateChart
from .jets import Jet2, check_regular, det4, wedge4


@dataclass(frozen=True)
class AdaptedFrame:
    x: np.ndarray
    y: np.ndarray
    e1: np.ndarray
    e2: np.ndarray

    def normal_coords(self, w: np.ndarray) -> np.ndarray:
        return np.array([w @ self.e1, w @ self.e2])

    def normal_vector(self, c) -> np.ndarray:
        return c[0] * self.e1 + c[1] * self.e2

    def rotated_normal(self, theta: float) -> "AdaptedFrame":
        """Same tangent frame, normal pair rotated by ``theta`` (orientation kept)."""
        ct, st = math.cos(theta), math.sin(theta)
        return AdaptedFrame(self.x, self.y, ct * self.e1 + st * self.e2, -st * self.e1 + ct * self.e2)


@dataclass(frozen=True)
class DerivativeDecomposition:
    """Christoffel symbols ``Gamma[i, j, k]`` and normal coefficients ``c[i, j, k]``.

    Indices are 0-based: ``c[0, 1, 1]`` is c_12^2.
    """

    Gamma: np.ndarray
    c: np.ndarray

    def cvec(self, i: int, j: int) -> np.ndarray:
        """Normal-frame coordinates of sigma(z_i, z_j), 1-based indices."""
        return self.c[i - 1, j - 1]


@dataclass(frozen=True)
class FundamentalData:
    E: float
    F: float
    G: float
    W: float
    L: float
    M: float
    N: float

    def first(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])

    def second(self) -> np.ndarray:
        return np.array([[self.L, self.M], [self.M, self.N]])


@dataclass(frozen=True)
class WeingartenMap:
    """``gamma[i, j]`` is gamma_{i+1}^{j+1}: gamma(z_i) = sum_j gamma_i^j z_j."""

    gamma: np.ndarray

    @property
    def trace(self) -> float:
        return float(self.gamma[0, 0] + self.gamma[1, 1])

    @property
    def det(self) -> float:
        g = self.gamma
        return float(g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0])


@dataclass(frozen=True)
class InvariantSet:
    k: float
    kappa: float
    K: float
    H: np.ndarray
    nu_hi: float
    nu_lo: float
    H_normal: tuple[float, float] | None = None

    @property
    def H_norm(self) -> float:
        return float(np.linalg.norm(self.H))


def _normal_threshold(jet: Jet2) -> float:
    scale = max(np.linalg.norm(jet.z_uu), np.linalg.norm(jet.z_uv), np.linalg.norm(jet.z_vv))
    return 1e-9 * (1.0 + scale)


def adapted_frame(jet: Jet2) -> AdaptedFrame:
    check_regular(jet)
    x = jet.z_u / np.linalg.norm(jet.z_u)
    y = jet.z_v - (jet.z_v @ x) * x
    y = y / np.linalg.norm(y)

    def normal_part(w):
        return w - (w @ x) * x - (w @ y) * y

    tol = _normal_threshold(jet)
    e1 = None
    for w in (jet.z_uu, jet.z_uv, jet.z_vv):
        n = normal_part(w)
        nn = np.linalg.norm(n)
        if nn > tol:
            e1 = n / nn
            break
    if e1 is None:
        # flat point: take the coordinate axis least aligned with the tangent plane
        basis = np.eye(4)
        i = int(np.argmax([np.linalg.norm(normal_part(b)) for b in basis]))
        n = normal_part(basis[i])
        e1 = n / np.linalg.norm(n)
    e2 = wedge4(x, y, e1)
    nrm = np.linalg.norm(e2)
    if nrm < 0.5:
        raise DegenerateChart("could not complete the normal frame")
    e2 = e2 / nrm
    if det4(x, y, e1, e2) < 0:
        e2 = -e2
    return AdaptedFrame(x, y, e1, e2)


def decompose(jet: Jet2, frame: AdaptedFrame) -> DerivativeDecomposition:
    check_regular(jet)
    gram = np.array([[jet.z_u @ jet.z_u, jet.z_u @ jet.z_v],
                     [jet.z_u @ jet.z_v, jet.z_v @ jet.z_v]])
    Gamma = np.zeros((2, 2, 2))
    c = np.zeros((2, 2, 2))
    for i in (1, 2):
        for j in (1, 2):
            w = jet.second(i, j)
            rhs = np.array([w @ jet.z_u, w @ jet.z_v])
            Gamma[i - 1, j - 1] = np.linalg.solve(gram, rhs)
            c[i - 1, j - 1] = frame.normal_coords(w)
    return DerivativeDecomposition(Gamma, c)


def _cross(a, b) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


def fundamental_data(jet: Jet2, dec: DerivativeDecomposition) -> FundamentalData:
    check_regular(jet)
    E = float(jet.z_u @ jet.z_u)
    F = float(jet.z_u @ jet.z_v)
    G = float(jet.z_v @ jet.z_v)
    W = math.sqrt(E * G - F * F)
    c11, c12, c22 = dec.cvec(1, 1), dec.cvec(1, 2), dec.cvec(2, 2)
    L = 2.0 / W * _cross(c11, c12)
    M = 1.0 / W * _cross(c11, c22)
    N = 2.0 / W * _cross(c12, c22)
    return FundamentalData(E, F, G, W, L, M, N)


def weingarten(fd: FundamentalData) -> WeingartenMap:
    E, F, G, L, M, N = fd.E, fd.F, fd.G, fd.L, fd.M, fd.N
    D = E * G - F * F
    if D <= 0:
        raise DegenerateChart("EG - F^2 must be positive")
    gamma = np.array([[F * M - G * L, F * L - E * M],
                      [F * N - G * M, F * M - E * N]]) / D
    return WeingartenMap(gamma)


def sigma_normal(dec: DerivativeDecomposition, a, b) -> np.ndarray:
    """Normal-frame coordinates of sigma(X, Y) for X = a[0] z_u + a[1] z_v, Y likewise."""
    c = dec.c
    return (a[0] * b[0] * c[0, 0] + (a[0] * b[1] + a[1] * b[0]) * c[0, 1]
            + a[1] * b[1] * c[1, 1])


def orthonormal_tangent_coeffs(fd: FundamentalData) -> tuple[np.ndarray, np.ndarray]:
    """(alpha, beta) coefficients of the frame vectors x = z_u/|z_u| and y (Gram-Schmidt)."""
    sE = math.sqrt(fd.E)
    return np.array([1.0 / sE, 0.0]), np.array([-fd.F / (sE * fd.W), sE / fd.W])


def invariants(fd: FundamentalData, dec: DerivativeDecomposition, frame: AdaptedFrame) -> InvariantSet:
    E, F, G, L, M, N = fd.E, fd.F, fd.G, fd.L, fd.M, fd.N
    D = E * G - F * F
    k = (L * N - M * M) / D
    kappa = (E * N + G * L - 2 * F * M) / (2 * D)
    c11, c12, c22 = dec.cvec(1, 1), dec.cvec(1, 2), dec.cvec(2, 2)
    K = (float(c11 @ c22) - float(c12 @ c12)) / D
    h = (G * c11 - 2 * F * c12 + E * c22) / (2 * D)
    H = frame.normal_vector(h)
    root = math.sqrt(max(kappa * kappa - k, 0.0))
    return InvariantSet(k, kappa, K, H, kappa + root, kappa - root, (float(h[0]), float(h[1])))


def default_tau(inv: InvariantSet) -> float:
    """Pointwise classification threshold 1e-7 (1 + |k| + |kappa|)."""
    return 1e-7 * (1.0 + abs(inv.k) + abs(inv.kappa))


@dataclass(frozen=True)
class PointData:
    """Everything the pointwise pipeline derives from one jet."""

    jet: Jet2
    frame: AdaptedFrame
    dec: DerivativeDecomposition
    fd: FundamentalData
    gamma: WeingartenMap
    inv: InvariantSet


def point_data(jet: Jet2) -> PointData:
    frame = adapted_frame(jet)
    dec = decompose(jet, frame)
    fd = fundamental_data(jet, dec)
    return PointData(jet, frame, dec, fd, weingarten(fd), invariants(fd, dec, frame))
