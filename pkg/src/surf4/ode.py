"""Meridian profiles with a prescribed curvature property.

Three generators, all arc-length profiles (f, g) with f' = y(f):

* constant Gauss curvature K: f'' + K f = 0, closed form;
* constant mean curvature norm a on a circle of spherical curvature b;
* constant invariant k = -a^2 on a circle of spherical curvature b.

For the last two y(t) is known in closed form and f is advanced by
fixed-step RK4 together with g' = sqrt(1 - f'^2).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import InvalidSpec, OutsideValidity, ProfileOutOfRange, StepTooLarge
from .families import (MeridianProfile, admissible_interval, constant_K_derivs,
                       profile_from_derivs)

RADICAND_STOP = 1e-10
KINDS = ("constant_K", "cmc", "constant_k")


def constant_K_profile(K: float, alpha0: float, beta0: float,
                       domain: tuple[float, float] | None = None,
                       max_span: float = 1.0) -> MeridianProfile:
    """f = alpha0 cos(sqrt(K) u) + beta0 sin(sqrt(K) u) (cosh/sinh when K < 0).

    Without ``domain`` the profile starts at u = 0 and runs until just before
    f or |f'| leaves its admissible range (or ``max_span``).
    """
    d = constant_K_derivs(K, alpha0, beta0)
    if domain is None:
        domain = admissible_interval(d, 0.0, max_span)
    return profile_from_derivs(f"constant_K({K:g})", d, domain)


# ------------------------------------------------------------ closed forms y(t)

def _cmc_parts(a: float, b: float, C: float, t: float, root_sign: int = 1):
    """(Phi, Phi') with Phi = t sqrt(1 - y^2) and Phi' = root_sign sqrt(4a^2t^2 - b^2)."""
    if a == 0:
        raise InvalidSpec("cmc profile needs a != 0")
    if t <= 0:
        raise OutsideValidity(f"t = {t} must be positive")
    rad = 4 * a * a * t * t - b * b
    if rad < 0:
        raise OutsideValidity(f"4a^2t^2 - b^2 = {rad:.3g} < 0 at t = {t}")
    r = math.sqrt(rad)
    prim = 0.5 * t * r
    if b != 0:
        prim -= b * b / (4 * a) * math.log(abs(2 * a * t + r))
    return C + root_sign * prim, root_sign * r


def cmc_y_of_t(a: float, b: float, C: float, t: float, root_sign: int = 1) -> float:
    """y(t) = sqrt(1 - Phi(t)^2 / t^2) for the constant-mean-curvature profile."""
    phi, _ = _cmc_parts(a, b, C, t, root_sign)
    q = phi / t
    if q < 0 or q > 1:
        raise OutsideValidity(f"Phi/t = {q:.6g} outside [0, 1] at t = {t}")
    return math.sqrt(max(1.0 - q * q, 0.0))


def cmc_radicand(a, b, C, t, root_sign=1) -> float:
    phi, _ = _cmc_parts(a, b, C, t, root_sign)
    q = phi / t
    if q < 0:
        raise OutsideValidity(f"Phi/t = {q:.6g} < 0 at t = {t}")
    return 1.0 - q * q


def _cmc_yy(a, b, C, t, root_sign=1):
    """(y, y y') at t."""
    phi, dphi = _cmc_parts(a, b, C, t, root_sign)
    q = phi / t
    if q < 0 or q > 1:
        raise OutsideValidity(f"Phi/t = {q:.6g} outside [0, 1] at t = {t}")
    y = math.sqrt(max(1.0 - q * q, 0.0))
    return y, -q * (dphi / t - phi / (t * t))


def _k_parts(a, b, C, t, branch):
    if a == 0 or b == 0:
        raise InvalidSpec("constant-k profile needs a != 0 and b != 0")
    P = C + branch * (a / b) * t * t / 2
    if not (0.0 < P < 1.0):
        raise OutsideValidity(f"C +/- (a/b) t^2/2 = {P:.6g} outside (0, 1) at t = {t}")
    return P, branch * (a / b) * t


def constant_k_y_of_t(a: float, b: float, C: float, t: float, branch: int = 1) -> float:
    """y(t) = sqrt(1 - (C + branch (a/b) t^2/2)^2)."""
    P, _ = _k_parts(a, b, C, t, branch)
    return math.sqrt(1.0 - P * P)


def _k_yy(a, b, C, t, branch):
    P, dP = _k_parts(a, b, C, t, branch)
    return math.sqrt(1.0 - P * P), -P * dP


# ------------------------------------------------------------ specs and integration

@dataclass(frozen=True)
class ODEProfileSpec:
    kind: str
    params: dict
    initial: tuple[float, float] = (0.0, 0.8)
    step: float = 1e-3
    max_span: float = 1.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown profile kind {self.kind!r}; expected one of {KINDS}")
        if not (self.step > 0 and self.max_span > 0):
            raise InvalidSpec("step and max_span must be positive")
        if self.step > self.max_span:
            raise InvalidSpec("step exceeds max_span")
        p = self.params
        try:
            if self.kind == "constant_K":
                if float(p["K"]) == 0:
                    raise InvalidSpec("K must be non-zero")
            else:
                if float(p["a"]) == 0 or float(p["b"]) == 0:
                    raise InvalidSpec("a and b must be non-zero")
                if self.kind == "constant_k" and int(p.get("branch", 1)) not in (1, -1):
                    raise InvalidSpec("branch must be +1 or -1")
                if self.kind == "cmc" and int(p.get("root_sign", 1)) not in (1, -1):
                    raise InvalidSpec("root_sign must be +1 or -1")
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidSpec(f"bad {self.kind} parameters: {exc}") from exc

    @staticmethod
    def from_dict(d: dict) -> "ODEProfileSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise InvalidSpec("profile spec must be an object with a 'kind' field")
        kind = d["kind"]
        skip = {"kind", "initial", "step", "max_span", "u_domain"}
        params = {k: v for k, v in d.items() if k not in skip}
        if kind in ("cmc", "constant_k"):
            params.setdefault("C", 0.0)
        if kind == "constant_k" and isinstance(params.get("branch"), str):
            params["branch"] = -1 if params["branch"].strip() == "-" else 1
        try:
            initial = tuple(float(x) for x in d.get("initial", (0.0, 0.8)))
            if len(initial) != 2:
                raise ValueError("initial must be [u_start, f_start]")
            return ODEProfileSpec(kind, params, initial, float(d.get("step", 1e-3)),
                                  float(d.get("max_span", 1.0)))
        except (TypeError, ValueError) as exc:
            raise InvalidSpec(str(exc)) from exc

    def as_dict(self) -> dict:
        return {"kind": self.kind, **self.params, "initial": list(self.initial),
                "step": self.step, "max_span": self.max_span}

    def yy(self) -> Callable[[float], tuple[float, float]]:
        """t -> (y(t), y(t) y'(t)); raises OutsideValidity outside the admissible region."""
        p = self.params
        if self.kind == "cmc":
            a, b, C, s = float(p["a"]), float(p["b"]), float(p.get("C", 0.0)), int(p.get("root_sign", 1))
            return lambda t: _cmc_yy(a, b, C, t, s)
        if self.kind == "constant_k":
            a, b, C, s = float(p["a"]), float(p["b"]), float(p.get("C", 0.0)), int(p.get("branch", 1))
            return lambda t: _k_yy(a, b, C, t, s)
        raise InvalidSpec("constant_K profiles have no y(t) generator")


@dataclass
class IntegratedProfile:
    u_grid: np.ndarray
    f_values: np.ndarray
    fdot_values: np.ndarray
    g_values: np.ndarray
    metadata: ODEProfileSpec
    fddot_values: Optional[np.ndarray] = None
    stop_reason: str = "max_span"

    def rows(self):
        return zip(self.u_grid, self.f_values, self.fdot_values, self.g_values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["u", "f", "fdot", "g"])
        for row in self.rows():
            w.writerow([f"{float(x):.17g}" for x in row])
        return buf.getvalue()


def _radicand_ok(y: float) -> bool:
    return y * y >= RADICAND_STOP


def _rk4_step(yfun, f, g, h):
    """One RK4 step of (f, g)' = (y(f), sqrt(1 - y(f)^2))."""
    def rhs(t):
        y = yfun(t)[0]
        return y, math.sqrt(max(1.0 - y * y, 0.0))
    k1 = rhs(f)
    k2 = rhs(f + 0.5 * h * k1[0])
    k3 = rhs(f + 0.5 * h * k2[0])
    k4 = rhs(f + h * k3[0])
    df = h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
    dg = h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
    return f + df, g + dg


def integrate_profile(spec: ODEProfileSpec) -> IntegratedProfile:
    """Fixed-step RK4 from ``spec.initial`` for at most ``spec.max_span`` in u.

    Integration stops at the last node before y^2 drops below 1e-10 or any
    RK4 stage leaves the validity region; that node is kept and the reason
    recorded. A start outside the validity region raises OutsideValidity.
    """
    u0, f0 = spec.initial
    n = int(round(spec.max_span / spec.step))
    h = spec.max_span / n
    if spec.kind == "constant_K":
        p = spec.params
        d = constant_K_derivs(float(p["K"]), float(p.get("alpha", 1.0)), float(p.get("beta", 0.0)))
        try:
            lo, hi = admissible_interval(d, u0, spec.max_span, step=min(h, 1e-3))
        except ProfileOutOfRange as exc:
            raise OutsideValidity(str(exc)) from exc
        m = max(1, int(math.floor((hi - lo) / h + 1e-9)))
        us = u0 + h * np.arange(m + 1)
        us[-1] = min(us[-1], hi)
        prof = profile_from_derivs("constant_K", d, (lo, hi), check=False)
        vals = np.array([d(float(u)) for u in us])
        gs = np.array([prof.g(float(u)) for u in us])
        reason = "max_span" if hi >= u0 + spec.max_span else "validity"
        return IntegratedProfile(us, vals[:, 0], vals[:, 1], gs, spec, vals[:, 2], reason)

    yfun = spec.yy()
    try:
        y0, yy0 = yfun(f0)
    except OutsideValidity as exc:
        raise OutsideValidity(f"initial point f = {f0} invalid: {exc}") from exc
    if not (_radicand_ok(y0) and y0 < 1.0):
        raise OutsideValidity(f"y(f_start) = {y0:.6g} must lie in (0, 1)")
    us, fs, gs = [u0], [f0], [0.0]
    reason = "max_span"
    for i in range(n):
        try:
            f1, g1 = _rk4_step(yfun, fs[-1], gs[-1], h)
            y1 = yfun(f1)[0]
        except OutsideValidity:
            reason = "validity"
            break
        if not _radicand_ok(y1) or not (f1 > 0):
            reason = "validity"
            break
        chord = math.hypot(f1 - fs[-1], g1 - gs[-1])
        if chord > h * (1 + 1e-6) or chord < 0.5 * h:
            raise StepTooLarge(f"chord {chord:.6g} incompatible with arc-length step {h:.6g} at u = {us[-1]}")
        us.append(u0 + (i + 1) * h)
        fs.append(f1)
        gs.append(g1)
    if len(us) < 2:
        raise OutsideValidity("no valid RK4 step from the initial point", last_valid=(us[0], fs[0]))
    fs_arr = np.array(fs)
    yy = np.array([yfun(float(f)) for f in fs_arr])
    return IntegratedProfile(np.array(us), fs_arr, yy[:, 0], np.array(gs), spec, yy[:, 1], reason)


def profile_chart_source(ip: IntegratedProfile) -> MeridianProfile:
    """MeridianProfile evaluating the integrated profile between nodes.

    f and g at u come from one RK4 sub-step off the preceding node; f' and
    f'' are then y(f) and y(f) y'(f), so the profile satisfies its ODE to
    rounding at every u.
    """
    spec = ip.metadata
    us, fs, gs = ip.u_grid, ip.f_values, ip.g_values
    u0, u1 = float(us[0]), float(us[-1])
    if spec.kind == "constant_K":
        p = spec.params
        d = constant_K_derivs(float(p["K"]), float(p.get("alpha", 1.0)), float(p.get("beta", 0.0)))
        return profile_from_derivs("constant_K", d, (u0, u1), check=False)
    yfun = spec.yy()
    h = float(us[1] - us[0])
    last = len(us) - 1

    def locate(u):
        i = int(math.floor((u - u0) / h))
        i = min(max(i, 0), last)
        return i, u - float(us[i])

    def fg(u):
        i, du = locate(u)
        if du == 0.0:
            return float(fs[i]), float(gs[i])
        return _rk4_step(yfun, float(fs[i]), float(gs[i]), du)

    def derivs(u):
        f = fg(u)[0]
        y, yy = yfun(f)
        return f, y, yy

    return MeridianProfile(f"{spec.kind}_profile", derivs, (u0, u1), lambda u: fg(u)[1])


# ------------------------------------------------------------ residuals

def constant_k_ode_residual(profile: IntegratedProfile, a: float, b: float,
                            branch: int | None = None) -> float:
    """max over interior nodes of |f''/sqrt(1 - f'^2) + branch (a/b) f|, f' and f'' by finite differences."""
    if branch is None:
        branch = int(profile.metadata.params.get("branch", 1)) if profile.metadata is not None else 1
    u, f = np.asarray(profile.u_grid, float), np.asarray(profile.f_values, float)
    if len(u) < 3:
        raise InvalidSpec("need at least three nodes")
    h = np.diff(u)
    hl, hr = h[:-1], h[1:]
    fl, fm, fr = f[:-2], f[1:-1], f[2:]
    fd = (fr - fl) / (hl + hr)
    fdd = 2 * (fr * hl - fm * (hl + hr) + fl * hr) / (hl * hr * (hl + hr))
    gd = np.sqrt(np.maximum(1.0 - fd * fd, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        res = np.abs(np.where(gd > 0, fdd / gd, np.inf) + branch * (a / b) * fm)
    return float(np.max(res))


def _d5(fn, t, h):
    """Fourth-order central difference."""
    return (-fn(t + 2 * h) + 8 * fn(t + h) - 8 * fn(t - h) + fn(t - 2 * h)) / (12 * h)


def cmc_ode_residual(a: float, b: float, C: float, t: float, h: float = 1e-4, root_sign: int = 1) -> float:
    """|1 - y^2 - (t/2)(y^2)' - sqrt(1 - y^2) sqrt(4a^2t^2 - b^2)| with (y^2)' by a five-point stencil."""
    y2 = lambda s: cmc_y_of_t(a, b, C, s, root_sign) ** 2
    dy2 = _d5(y2, t, h)
    y = cmc_y_of_t(a, b, C, t, root_sign)
    return abs(1 - y * y - 0.5 * t * dy2 - root_sign * math.sqrt(1 - y * y) * math.sqrt(4 * a * a * t * t - b * b))


def constant_k_first_order_residual(a: float, b: float, C: float, t: float, branch: int = 1,
                                    h: float = 1e-4) -> float:
    """|y y' / sqrt(1 - y^2) + branch (a/b) t| with y' by a five-point stencil (the first-order form of f''/g' = -/+ (a/b) f)."""
    y = lambda s: constant_k_y_of_t(a, b, C, s, branch)
    dy = _d5(y, t, h)
    yt = y(t)
    return abs(yt * dy / math.sqrt(1 - yt * yt) + branch * (a / b) * t)
