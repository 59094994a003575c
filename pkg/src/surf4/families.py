"""Surface families with analytic jets.

* meridian surfaces z = f(u) l(v) + g(u) e4 on a rotational hypersurface,
  with l a unit-speed curve on S^2 in span{e1, e2, e3};
* generalized rotational surfaces (f cos av, f sin av, g cos bv, g sin bv);
* reference charts used as a test corpus (plane, hyperplanar sphere,
  Clifford torus, the holomorphic graph w -> w^2, a non-super-conformal
  minimal surface);
* :func:`build_chart`, which turns a JSON surface spec into a chart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import (DegenerateCurve, InvalidProfile, InvalidSpec, PoleOfProfile,
                     ProfileOutOfRange, SpecError)
from .expr import compile_expr
from .forms import InvariantSet
from .jets import Jet2, ParamPoint, SurfaceChart

E4 = np.array([0.0, 0.0, 0.0, 1.0])
TWO_PI = 2.0 * math.pi

Derivs = Callable[[float], tuple[float, float, float]]


# ------------------------------------------------------------ spherical curves

@dataclass(frozen=True)
class SphericalCurve:
    """Unit-speed curve on S^2(1) with its spherical Frenet frame.

    ``frame(v)`` returns (l, t, n, kappa) with l' = t, t' = kappa n - l,
    n' = -kappa t and n = l x t.
    """

    name: str
    frame: Callable[[float], tuple[np.ndarray, np.ndarray, np.ndarray, float]]
    domain: tuple[float, float]
    curvature: Optional[float] = None


def great_circle() -> SphericalCurve:
    def frame(v):
        c, s = math.cos(v), math.sin(v)
        return (np.array([c, s, 0.0, 0.0]), np.array([-s, c, 0.0, 0.0]),
                np.array([0.0, 0.0, 1.0, 0.0]), 0.0)
    return SphericalCurve("great_circle", frame, (0.0, TWO_PI), 0.0)


def small_circle(curvature: float) -> SphericalCurve:
    """Circle at colatitude theta with spherical curvature cot(theta) = ``curvature``."""
    if curvature == 0:
        return great_circle()
    theta = math.atan2(1.0, curvature)
    s, c = math.sin(theta), math.cos(theta)

    def frame(v):
        w = v / s
        cw, sw = math.cos(w), math.sin(w)
        return (np.array([s * cw, s * sw, c, 0.0]), np.array([-sw, cw, 0.0, 0.0]),
                np.array([-c * cw, -c * sw, s, 0.0]), curvature)
    return SphericalCurve(f"circle({curvature:g})", frame, (0.0, TWO_PI * s), float(curvature))


def frenet_curve(kappa: Callable[[float], float], domain: tuple[float, float],
                 step: float = 1e-3, name: str = "frenet") -> SphericalCurve:
    """Spherical curve with prescribed curvature, integrated from l=e1, t=e2 at v=domain[0].

    The Frenet system is advanced with fixed-step RK4; evaluation between
    nodes takes one partial RK4 step from the preceding node.
    """
    v0, v1 = domain
    n_steps = int(math.ceil((v1 - v0) / step))
    h = (v1 - v0) / n_steps

    def rhs(v, Y):
        l, t, n = Y[0:3], Y[3:6], Y[6:9]
        k = kappa(v)
        return np.concatenate([t, k * n - l, -k * t])

    def rk4(v, Y, dv):
        k1 = rhs(v, Y)
        k2 = rhs(v + dv / 2, Y + dv / 2 * k1)
        k3 = rhs(v + dv / 2, Y + dv / 2 * k2)
        k4 = rhs(v + dv, Y + dv * k3)
        return Y + dv / 6 * (k1 + 2 * k2 + 2 * k3 + k4)

    nodes = np.empty((n_steps + 1, 9))
    nodes[0] = [1, 0, 0, 0, 1, 0, 0, 0, 1]
    for i in range(n_steps):
        nodes[i + 1] = rk4(v0 + i * h, nodes[i], h)

    def frame(v):
        if not (v0 <= v <= v1):
            raise InvalidSpec(f"v = {v} outside curve domain {domain}")
        i = min(int((v - v0) / h), n_steps - 1)
        vi = v0 + i * h
        Y = nodes[i] if v == vi else rk4(vi, nodes[i], v - vi)
        pad = lambda a: np.append(a, 0.0)
        return pad(Y[0:3]), pad(Y[3:6]), pad(Y[6:9]), float(kappa(v))

    return SphericalCurve(name, frame, (v0, v1), None)


# ------------------------------------------------------------ meridian profiles

@dataclass(frozen=True)
class MeridianProfile:
    """Arc-length meridian (f, g): ``derivs(u) = (f, f', f'')``, ``g(u)`` by quadrature."""

    name: str
    derivs: Derivs
    domain: tuple[float, float]
    g: Callable[[float], float]

    def gdot(self, u: float) -> float:
        fd = self.derivs(u)[1]
        return math.sqrt(max(1.0 - fd * fd, 0.0))

    def full(self, u: float) -> tuple[float, float, float, float, float, float]:
        """(f, f', f'', g, g', g'') with g' = sqrt(1 - f'^2)."""
        f, fd, fdd = self.derivs(u)
        r = 1.0 - fd * fd
        if r <= 0.0:
            raise InvalidProfile(f"|f'| >= 1 at u = {u}; g' is undefined")
        gd = math.sqrt(r)
        return f, fd, fdd, self.g(u), gd, -fd * fdd / gd


class SimpsonPrimitive:
    """Primitive of a function on [a, b] by composite Simpson at step <= h.

    Node values are accumulated once; evaluation adds one Simpson panel from
    the preceding node.
    """

    def __init__(self, fn: Callable[[float], float], a: float, b: float,
                 h: float = 1e-3, value_at_a: float = 0.0):
        self.fn = fn
        self.a = a
        n = max(1, int(math.ceil((b - a) / h)))
        self.h = (b - a) / n
        self.n = n
        acc = np.empty(n + 1)
        acc[0] = value_at_a
        for i in range(n):
            x = a + i * self.h
            acc[i + 1] = acc[i] + self._panel(x, x + self.h)
        self.nodes = acc

    def _panel(self, x0, x1):
        if x1 == x0:
            return 0.0
        return (x1 - x0) / 6.0 * (self.fn(x0) + 4.0 * self.fn(0.5 * (x0 + x1)) + self.fn(x1))

    def __call__(self, x: float) -> float:
        i = int(math.floor((x - self.a) / self.h))
        i = min(max(i, 0), self.n)
        x0 = self.a + i * self.h
        return float(self.nodes[i] + self._panel(x0, x))


def _sqrt_one_minus_sq(derivs: Derivs) -> Callable[[float], float]:
    def gd(u):
        fd = derivs(u)[1]
        return math.sqrt(max(1.0 - fd * fd, 0.0))
    return gd


def profile_from_derivs(name: str, derivs: Derivs, domain: tuple[float, float],
                        g0: float = 0.0, check: bool = True) -> MeridianProfile:
    """Profile from analytic (f, f', f''); g by quadrature of sqrt(1 - f'^2) from domain[0]."""
    u0, u1 = domain
    if check:
        for u in np.linspace(u0, u1, 257):
            f, fd, _ = derivs(float(u))
            if abs(fd) >= 1.0:
                raise ProfileOutOfRange(f"|f'({u:.6g})| = {abs(fd):.6g} >= 1 inside the domain")
            if f <= 0.0:
                raise ProfileOutOfRange(f"f({u:.6g}) = {f:.6g} <= 0 inside the domain")
    g = SimpsonPrimitive(_sqrt_one_minus_sq(derivs), u0, u1, 1e-3, g0)
    return MeridianProfile(name, derivs, (u0, u1), g)


def expr_profile(f_source: str, domain: tuple[float, float], constants=None) -> MeridianProfile:
    e = compile_expr(f_source, constants, variables=("u", "\0"))
    return profile_from_derivs(f"f={f_source}", e.derivs_u, domain)


def constant_K_derivs(K: float, alpha: float, beta: float) -> Derivs:
    if K == 0:
        raise InvalidSpec("constant Gauss curvature must be non-zero")
    r = math.sqrt(abs(K))
    if K > 0:
        def derivs(u):
            c, s = math.cos(r * u), math.sin(r * u)
            f = alpha * c + beta * s
            return f, r * (-alpha * s + beta * c), -K * f
    else:
        def derivs(u):
            c, s = math.cosh(r * u), math.sinh(r * u)
            f = alpha * c + beta * s
            return f, r * (alpha * s + beta * c), -K * f
    return derivs


def admissible_interval(derivs: Derivs, start: float, span: float, step: float = 1e-3,
                        clip: float = 1e-4) -> tuple[float, float]:
    """Largest [start, start + s] (s <= span) with f > 0 and |f'| < 1, clipped before the violation."""
    f, fd, _ = derivs(start)
    if f <= 0 or abs(fd) >= 1:
        raise ProfileOutOfRange(f"profile inadmissible at its start u = {start}")
    n = int(math.ceil(span / step))
    h = span / n
    prev = start
    for i in range(1, n + 1):
        u = start + i * h
        f, fd, _ = derivs(u)
        if f <= 0 or abs(fd) >= 1:
            lo, hi = prev, u
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                fm, fdm, _ = derivs(mid)
                if fm <= 0 or abs(fdm) >= 1:
                    hi = mid
                else:
                    lo = mid
            return start, lo - clip
        prev = u
    return start, start + span


# ------------------------------------------------------------ meridian surfaces

@dataclass(frozen=True)
class MeridianSpec:
    curve: SphericalCurve
    profile: MeridianProfile


def meridian_surface(spec: MeridianSpec, name: str = "meridian") -> SurfaceChart:
    prof, curve = spec.profile, spec.curve
    for u in np.linspace(prof.domain[0], prof.domain[1], 257):
        fd = prof.derivs(float(u))[1]
        if fd * fd > 1.0:
            raise InvalidProfile(f"f'({u:.6g})^2 = {fd * fd:.6g} > 1: g' is undefined")

    def position(u, v):
        f = prof.derivs(u)[0]
        l = curve.frame(v)[0]
        return f * l + prof.g(u) * E4

    def analytic(u, v):
        f, fd, fdd, g, gd, gdd = prof.full(u)
        l, t, n, kap = curve.frame(v)
        return Jet2(
            f * l + g * E4,
            fd * l + gd * E4,
            f * t,
            fdd * l + gdd * E4,
            fd * t,
            f * (kap * n - l),
        )

    domain = (prof.domain[0], prof.domain[1], curve.domain[0], curve.domain[1])
    return SurfaceChart(name, domain, position, analytic,
                        meta={"family": "meridian", "profile": prof.name, "curve": curve.name})


def _meridian_local(spec: MeridianSpec, p: ParamPoint):
    f, fd, fdd, g, gd, gdd = spec.profile.full(p.u)
    if abs(f) <= 1e-12:
        raise PoleOfProfile(f"f({p.u}) = 0")
    l, t, n, kap = spec.curve.frame(p.v)
    kappa_m = fd * gdd - gd * fdd
    return f, fd, fdd, gd, gdd, kappa_m, l, t, n, kap


def meridian_invariants_closed_form(spec: MeridianSpec, p: ParamPoint) -> InvariantSet:
    f, fd, fdd, gd, gdd, kappa_m, l, t, n, kap = _meridian_local(spec, p)
    k = -(kappa_m ** 2) * kap ** 2 / f ** 2
    K = kappa_m * gd / f
    n1, n2 = n, -gd * l + fd * E4
    h1, h2 = kap / (2 * f), (gd + f * kappa_m) / (2 * f)
    root = math.sqrt(max(-k, 0.0))
    return InvariantSet(k, 0.0, K, h1 * n1 + h2 * n2, root, -root, (h1, h2))


def meridian_curvature(spec: MeridianSpec, u: float) -> float:
    """kappa_m = f' g'' - g' f'' = -f'' / sqrt(1 - f'^2)."""
    _, fd, fdd, _, gd, gdd = spec.profile.full(u)
    return fd * gdd - gd * fdd


def meridian_frame(spec: MeridianSpec, u: float, v: float):
    """The frame {x, y, n1, n2} = {z_u, t, n, -g' l + f' e4}."""
    _, fd, _, _, gd, _ = spec.profile.full(u)
    l, t, n, _ = spec.curve.frame(v)
    return fd * l + gd * E4, t, n, -gd * l + fd * E4


def meridian_H_norm(spec: MeridianSpec, p: ParamPoint) -> float:
    """||H|| = sqrt((kappa^2 + (g' + f kappa_m)^2) / (4 f^2))."""
    f, _, _, gd, _, kappa_m, _, _, _, kap = _meridian_local(spec, p)
    return math.sqrt((kap ** 2 + (gd + f * kappa_m) ** 2) / (4 * f * f))


# ------------------------------------------------------------ rotational surfaces

@dataclass(frozen=True)
class RotationalSpec:
    """(f cos(alpha v), f sin(alpha v), g cos(beta v), g sin(beta v)); f, g give (value, d1, d2)."""

    f: Derivs
    g: Derivs
    alpha: float
    beta: float
    domain: tuple[float, float, float, float]
    name: str = "rotational"

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidSpec("rotation speeds alpha, beta must be positive")


def rotational_from_expr(f_src: str, g_src: str, alpha: float, beta: float,
                         domain=(0.5, 1.5, 0.0, TWO_PI), constants=None, name=None) -> RotationalSpec:
    f = compile_expr(f_src, constants, variables=("u", "\0"))
    g = compile_expr(g_src, constants, variables=("u", "\0"))
    return RotationalSpec(f.derivs_u, g.derivs_u, float(alpha), float(beta), tuple(domain),
                          name or f"rotational(f={f_src}, g={g_src}, alpha={alpha:g}, beta={beta:g})")


def rotational_surface(spec: RotationalSpec) -> SurfaceChart:
    al, be = spec.alpha, spec.beta

    def position(u, v):
        f = spec.f(u)[0]
        g = spec.g(u)[0]
        return np.array([f * math.cos(al * v), f * math.sin(al * v),
                         g * math.cos(be * v), g * math.sin(be * v)])

    def analytic(u, v):
        f, f1, f2 = spec.f(u)
        g, g1, g2 = spec.g(u)
        ca, sa, cb, sb = math.cos(al * v), math.sin(al * v), math.cos(be * v), math.sin(be * v)
        return Jet2(
            np.array([f * ca, f * sa, g * cb, g * sb]),
            np.array([f1 * ca, f1 * sa, g1 * cb, g1 * sb]),
            np.array([-al * f * sa, al * f * ca, -be * g * sb, be * g * cb]),
            np.array([f2 * ca, f2 * sa, g2 * cb, g2 * sb]),
            np.array([-al * f1 * sa, al * f1 * ca, -be * g1 * sb, be * g1 * cb]),
            np.array([-al * al * f * ca, -al * al * f * sa, -be * be * g * cb, -be * be * g * sb]),
        )

    return SurfaceChart(spec.name, spec.domain, position, analytic, meta={"family": "rotational"})


def rotational_LMN_closed_form(spec: RotationalSpec, u: float) -> tuple[float, float, float]:
    f, f1, f2 = spec.f(u)
    g, g1, g2 = spec.g(u)
    al, be = spec.alpha, spec.beta
    A = al * al * f * f + be * be * g * g
    B = f1 * f1 + g1 * g1
    P = g * f1 - f * g1
    Q = g1 * f2 - f1 * g2
    R = be * be * g * f1 - al * al * f * g1
    L = 2 * al * be * P * Q / (A * B)
    N = -2 * al * be * P * R / (A * B)
    return L, 0.0, N


def rotational_invariants_closed_form(spec: RotationalSpec, p: ParamPoint) -> InvariantSet:
    """k, kappa, K from the closed forms; H from the normal coefficients in the frame {n1, n2}."""
    u, v = p.u, p.v
    f, f1, f2 = spec.f(u)
    g, g1, g2 = spec.g(u)
    al, be = spec.alpha, spec.beta
    A = al * al * f * f + be * be * g * g
    B = f1 * f1 + g1 * g1
    if A <= 0 or B <= 0:
        raise InvalidSpec(f"degenerate rotational surface at u = {u}")
    P = g * f1 - f * g1
    Q = g1 * f2 - f1 * g2
    R = be * be * g * f1 - al * al * f * g1
    k = -4 * al ** 2 * be ** 2 * P ** 2 * Q * R / (A ** 3 * B ** 3)
    kappa = al * be * P / (A ** 2 * B ** 2) * (A * Q - B * R)
    K = (A * R * Q - al ** 2 * be ** 2 * B * P ** 2) / (A ** 2 * B ** 2)
    # sigma(x, x) = c11 / E, sigma(y, y) = c22 / G, both along n1
    c11 = Q / math.sqrt(B)
    c22 = R / math.sqrt(B)
    h1 = 0.5 * (c11 / B + c22 / A)
    ca, sa, cb, sb = math.cos(al * v), math.sin(al * v), math.cos(be * v), math.sin(be * v)
    n1 = np.array([g1 * ca, g1 * sa, -f1 * cb, -f1 * sb]) / math.sqrt(B)
    root = math.sqrt(max(kappa * kappa - k, 0.0))
    return InvariantSet(k, kappa, K, h1 * n1, kappa + root, kappa - root, None)


def rotational_case3_closed_form(alpha: float, beta: float, c: float, u: float) -> tuple[float, float]:
    """(kappa, K) for f = u, g = c u^(beta^2/alpha^2)."""
    r = beta ** 2 / alpha ** 2
    e = 2 * (beta ** 2 - alpha ** 2) / alpha ** 2
    A = alpha ** 2 * u ** 2 + beta ** 2 * c ** 2 * u ** (2 * r)
    B = 1 + c ** 2 * beta ** 4 / alpha ** 4 * u ** e
    kappa = c ** 2 * beta ** 3 * (beta ** 2 - alpha ** 2) ** 2 * u ** e / (alpha ** 5 * A * B ** 2)
    K = -c ** 2 * beta ** 2 * (beta ** 2 - alpha ** 2) ** 2 * u ** (2 * r) / (alpha ** 2 * A ** 2 * B)
    return kappa, K


@dataclass(frozen=True)
class FrenetCurvatures:
    """Frenet curvatures of a parallel u = const, as rates per unit of v."""

    kappa1: float
    tau: float
    sigma: float


def frenet_curvatures_u_const(spec: RotationalSpec, u0: float) -> FrenetCurvatures:
    a, b = spec.f(u0)[0], spec.g(u0)[0]
    al, be = spec.alpha, spec.beta
    s2 = a * a * al ** 2 + b * b * be ** 2
    s4 = a * a * al ** 4 + b * b * be ** 4
    if s2 <= 0 or s4 <= 0:
        raise DegenerateCurve(f"parallel u = {u0} degenerates to a point")
    return FrenetCurvatures(
        math.sqrt(s4 / s2),
        a * b * al * be * (al ** 2 - be ** 2) / (math.sqrt(s4) * math.sqrt(s2)),
        al * be * math.sqrt(s2) / math.sqrt(s4),
    )


def rotational_case(case: int, alpha: float = 1.0, beta: float = 2.0, a: float = 1.0,
                    b: float = 1.0, c: float = 1.0, domain=(0.5, 1.5, 0.0, TWO_PI)) -> RotationalSpec:
    """The three k = 0 families with f = u: g = a u, g = a u + b, g = c u^(beta^2/alpha^2)."""
    if case == 1:
        g = f"{a!r}*u"
    elif case == 2:
        g = f"{a!r}*u + {b!r}"
    elif case == 3:
        g = f"{c!r}*u**({beta!r}**2/{alpha!r}**2)"
    else:
        raise InvalidSpec(f"unknown rotational case {case}")
    return rotational_from_expr("u", g, alpha, beta, domain, name=f"rotational_case{case}")


# ------------------------------------------------------------ reference charts

def plane(domain=(-1.0, 1.0, -1.0, 1.0)) -> SurfaceChart:
    o, z = np.zeros(4), np.zeros(4)
    ex, ey = np.eye(4)[0], np.eye(4)[1]
    return SurfaceChart("plane", domain, lambda u, v: np.array([u, v, 0.0, 0.0]),
                        lambda u, v: Jet2(np.array([u, v, 0.0, 0.0]), ex, ey, o, z, o))


def hyperplanar_sphere(domain=(0.3, math.pi - 0.3, 0.0, TWO_PI)) -> SurfaceChart:
    """Unit sphere in span{e1, e2, e3}: colatitude u, longitude v."""
    def pos(u, v):
        return np.array([math.sin(u) * math.cos(v), math.sin(u) * math.sin(v), math.cos(u), 0.0])

    def analytic(u, v):
        su, cu, sv, cv = math.sin(u), math.cos(u), math.sin(v), math.cos(v)
        return Jet2(
            pos(u, v),
            np.array([cu * cv, cu * sv, -su, 0.0]),
            np.array([-su * sv, su * cv, 0.0, 0.0]),
            np.array([-su * cv, -su * sv, -cu, 0.0]),
            np.array([-cu * sv, cu * cv, 0.0, 0.0]),
            np.array([-su * cv, -su * sv, 0.0, 0.0]),
        )
    return SurfaceChart("sphere", domain, pos, analytic)


def clifford(r1: float = 1.0, r2: float = 1.0, domain=(0.0, TWO_PI, 0.0, TWO_PI)) -> SurfaceChart:
    if not (r1 > 0 and r2 > 0):
        raise InvalidSpec(f"clifford radii must be positive, got {r1}, {r2}")
    def pos(u, v):
        return np.array([r1 * math.cos(u), r1 * math.sin(u), r2 * math.cos(v), r2 * math.sin(v)])

    def analytic(u, v):
        cu, su, cv, sv = math.cos(u), math.sin(u), math.cos(v), math.sin(v)
        return Jet2(
            pos(u, v),
            np.array([-r1 * su, r1 * cu, 0.0, 0.0]),
            np.array([0.0, 0.0, -r2 * sv, r2 * cv]),
            np.array([-r1 * cu, -r1 * su, 0.0, 0.0]),
            np.zeros(4),
            np.array([0.0, 0.0, -r2 * cv, -r2 * sv]),
        )
    return SurfaceChart(f"clifford({r1:g},{r2:g})", domain, pos, analytic)


def wsq(domain=(-1.0, 1.0, -1.0, 1.0)) -> SurfaceChart:
    """Graph of the holomorphic map w -> w^2: (u, v, u^2 - v^2, 2uv)."""
    def pos(u, v):
        return np.array([u, v, u * u - v * v, 2 * u * v])

    def analytic(u, v):
        return Jet2(pos(u, v), np.array([1.0, 0.0, 2 * u, 2 * v]), np.array([0.0, 1.0, -2 * v, 2 * u]),
                    np.array([0.0, 0.0, 2.0, 0.0]), np.array([0.0, 0.0, 0.0, 2.0]),
                    np.array([0.0, 0.0, -2.0, 0.0]))
    return SurfaceChart("wsq", domain, pos, analytic)


# Re of the null curve (w + w^4/4, i(w - w^4/4), w^2/2 - w^3/3, -i(w^2/2 + w^3/3)):
# a minimal surface whose two Gauss-map factors (w, w^2) are both non-constant,
# so its curvature ellipse is not a circle.
MINIMAL_GENERAL = (
    "u + (u**4 - 6*u**2*v**2 + v**4)/4",
    "-v + u**3*v - u*v**3",
    "(u**2 - v**2)/2 - (u**3 - 3*u*v**2)/3",
    "u*v + (3*u**2*v - v**3)/3",
)


def expr_chart(components, domain, constants=None, name="expr") -> SurfaceChart:
    if len(components) != 4:
        raise SpecError("an expression chart needs exactly four components")
    exprs = [compile_expr(c, constants) for c in components]

    def pos(u, v):
        return np.array([e(u, v) for e in exprs])

    def analytic(u, v):
        ts = [e.jet(u, v) for e in exprs]
        col = lambda attr: np.array([getattr(t, attr) for t in ts])
        return Jet2(col("val"), col("du"), col("dv"), col("duu"), col("duv"), col("dvv"))

    return SurfaceChart(name, tuple(float(x) for x in domain), pos, analytic)


def minimal_general(domain=(-0.4, 0.4, -0.4, 0.4)) -> SurfaceChart:
    return expr_chart(MINIMAL_GENERAL, domain, name="minimal_general")


def reference_surfaces() -> dict[str, SurfaceChart]:
    return {
        "plane": plane(),
        "sphere": hyperplanar_sphere(),
        "clifford(1,1)": clifford(1.0, 1.0),
        "clifford(1,2)": clifford(1.0, 2.0),
        "wsq": wsq(),
        "minimal_general": minimal_general(),
    }


# ------------------------------------------------------------ JSON surface spec

def _curve_from(params: Mapping) -> SphericalCurve:
    kind = params.get("kind", "circle")
    if kind == "great_circle":
        return great_circle()
    if kind == "circle":
        return small_circle(float(params.get("curvature", 1.0)))
    if kind == "frenet":
        kexpr = compile_expr(str(params["curvature"]), params.get("constants"), variables=("v", "\0"))
        dom = tuple(params.get("domain", (0.0, TWO_PI)))
        return frenet_curve(kexpr, dom, float(params.get("step", 1e-3)), name=f"frenet({kexpr.source})")
    raise SpecError(f"unknown spherical curve kind {kind!r}")


def _profile_from(params: Mapping, u_domain) -> MeridianProfile:
    kind = params.get("kind", "expr")
    if kind == "expr":
        return expr_profile(str(params["f"]), u_domain, params.get("constants"))
    if kind == "constant_K":
        d = constant_K_derivs(float(params["K"]), float(params.get("alpha", 1.0)),
                              float(params.get("beta", 0.0)))
        return profile_from_derivs(f"constant_K({params['K']})", d, u_domain)
    if kind in ("cmc", "constant_k"):
        from .ode import ODEProfileSpec, integrate_profile, profile_chart_source
        spec = ODEProfileSpec.from_dict(params)
        return profile_chart_source(integrate_profile(spec))
    raise SpecError(f"unknown profile kind {kind!r}")


def build_chart(spec: Mapping) -> SurfaceChart:
    """Chart from a JSON surface spec ``{"family", "params", "domain", "jet_mode"}``."""
    if not isinstance(spec, Mapping) or "family" not in spec:
        raise SpecError("surface spec must be an object with a 'family' field")
    fam = spec["family"]
    params = spec.get("params", {}) or {}
    dom = spec.get("domain")
    if dom is not None:
        if len(dom) != 4:
            raise SpecError("domain must be [u0, u1, v0, v1]")
        dom = tuple(float(x) for x in dom)
    mode = spec.get("jet_mode", "analytic")
    try:
        chart = _build_family(fam, params, dom)
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"bad parameters for family {fam!r}: {exc}") from exc
    if mode != chart.jet_mode:
        chart = chart.with_mode(mode)
    return chart


def _build_family(fam: str, params: Mapping, dom) -> SurfaceChart:
    kw = {} if dom is None else {"domain": dom}
    if fam == "plane":
        return plane(**kw)
    if fam == "sphere":
        return hyperplanar_sphere(**kw)
    if fam == "clifford":
        return clifford(float(params.get("r1", 1.0)), float(params.get("r2", 1.0)), **kw)
    if fam == "wsq":
        return wsq(**kw)
    if fam == "minimal_general":
        return minimal_general(**kw)
    if fam == "expr":
        return expr_chart(params["x"], dom or (-1.0, 1.0, -1.0, 1.0), params.get("constants"))
    if fam == "rotational":
        rs = rotational_from_expr(str(params["f"]), str(params["g"]), params.get("alpha", 1.0),
                                  params.get("beta", 1.0), dom or (0.5, 1.5, 0.0, TWO_PI),
                                  params.get("constants"))
        return rotational_surface(rs)
    if fam.startswith("rotational_case"):
        case = int(fam[len("rotational_case"):])
        rs = rotational_case(case, **{k: float(v) for k, v in params.items()}, **kw)
        return rotational_surface(rs)
    if fam == "meridian":
        chart = meridian_surface(meridian_spec_from(params, dom))
        if dom is not None:
            chart = SurfaceChart(chart.name, dom, chart.position, chart.analytic, meta=chart.meta)
        return chart
    if fam == "piecewise_u":
        split = float(params["split"])
        left, right = build_chart(params["left"]), build_chart(params["right"])
        return piecewise_u(left, right, split, dom)
    raise SpecError(f"unknown surface family {fam!r}")


def meridian_spec_from(params: Mapping, dom=None) -> MeridianSpec:
    pparams = params.get("profile", {})
    cparams = params.get("curve")
    if cparams is None:
        # the ODE profiles are built for a circle of spherical curvature b
        cparams = {"kind": "circle", "curvature": float(pparams.get("b", 1.0))}
    curve = _curve_from(cparams)
    if dom is not None:
        u_dom = (dom[0], dom[1])
    elif "u_domain" in pparams:
        u_dom = tuple(pparams["u_domain"])
    else:
        u_dom = None
    if u_dom is None and pparams.get("kind") in ("expr", "constant_K", None):
        if pparams.get("kind") == "constant_K":
            d = constant_K_derivs(float(pparams["K"]), float(pparams.get("alpha", 1.0)),
                                  float(pparams.get("beta", 0.0)))
            u_dom = admissible_interval(d, 0.0, float(pparams.get("max_span", 1.0)))
        else:
            raise SpecError("an expression profile needs a domain")
    prof = _profile_from(pparams, u_dom)
    if dom is not None and pparams.get("kind") in ("cmc", "constant_k"):
        lo, hi = prof.domain
        if dom[0] < lo or dom[1] > hi:
            raise SpecError(f"requested u-range {dom[:2]} exceeds the integrated span {prof.domain}")
        prof = MeridianProfile(prof.name, prof.derivs, (dom[0], dom[1]), prof.g)
    return MeridianSpec(curve, prof)


def piecewise_u(left: SurfaceChart, right: SurfaceChart, split: float, dom=None) -> SurfaceChart:
    """Use ``left`` for u < split and ``right`` for u >= split (pointwise jets only)."""
    pick = lambda u: left if u < split else right

    def pos(u, v):
        return pick(u).position(u, v)

    analytic = None
    if left.analytic is not None and right.analytic is not None:
        def analytic(u, v):
            return pick(u).analytic(u, v)

    if dom is None:
        dom = (left.domain[0], right.domain[1], max(left.domain[2], right.domain[2]),
               min(left.domain[3], right.domain[3]))
    return SurfaceChart(f"piecewise({left.name}|{right.name})", dom, pos, analytic,
                        "analytic" if analytic is not None else "fd")
