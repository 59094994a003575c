import math

import numpy as np
import pytest

from surf4.errors import DegenerateCurve, InvalidProfile, InvalidSpec, PoleOfProfile, SpecError
from surf4.families import (MeridianSpec, build_chart, expr_profile, frenet_curvatures_u_const,
                            frenet_curve, great_circle, meridian_frame, meridian_H_norm,
                            meridian_invariants_closed_form, meridian_surface, profile_from_derivs,
                            reference_surfaces, rotational_case, rotational_case3_closed_form,
                            rotational_from_expr, rotational_invariants_closed_form,
                            rotational_LMN_closed_form, rotational_surface, small_circle)
from surf4.forms import point_data
from surf4.jets import ParamPoint, evaluate_jet

from conftest import meridian_specs, random_points, rotational_specs

MERIDIANS = meridian_specs()
ROTATIONAL = rotational_specs()


def pdata(chart, u, v):
    return point_data(evaluate_jet(chart, ParamPoint(u, v)))


@pytest.mark.parametrize("curve", [great_circle(), small_circle(1.0), small_circle(-0.4),
                                   frenet_curve(lambda v: 0.5 + 0.3 * math.sin(v), (0.0, 3.0))],
                         ids=["great", "small1", "small-0.4", "frenet"])
def test_spherical_frenet_system(curve):
    h = 1e-4
    for v in np.linspace(curve.domain[0] + 0.01, curve.domain[1] - 0.01, 9):
        l, t, n, kap = curve.frame(v)
        assert np.linalg.norm(l) == pytest.approx(1.0, abs=1e-12)
        assert abs(l[3]) == 0.0
        assert np.allclose(np.cross(l[:3], t[:3]), n[:3], atol=1e-10)
        lp, tp, np_ = [(a - b) / (2 * h) for a, b in zip(curve.frame(v + h)[:3], curve.frame(v - h)[:3])]
        assert np.abs(lp - t).max() <= 1e-7
        assert np.abs(tp - (kap * n - l)).max() <= 1e-7
        assert np.abs(np_ + kap * t).max() <= 1e-7


def test_small_circle_curvature_is_cot_colatitude():
    c = small_circle(1.0)
    l = c.frame(0.3)[0]
    assert math.acos(l[2]) == pytest.approx(math.pi / 4)


@pytest.mark.parametrize("name", list(MERIDIANS))
def test_profile_is_arc_length(name):
    prof = MERIDIANS[name].profile
    u0, u1 = prof.domain
    h = 1e-5
    for u in np.linspace(u0 + 0.01, u1 - 0.01, 15):
        f, fd, fdd, g, gd, gdd = prof.full(u)
        assert fd * fd + gd * gd == pytest.approx(1.0, abs=1e-8)
        assert f > 0
        # g from quadrature differentiates back to sqrt(1 - f'^2)
        assert (prof.g(u + h) - prof.g(u - h)) / (2 * h) == pytest.approx(gd, abs=1e-8)


def test_meridian_cos_example():
    ch = meridian_surface(MERIDIANS["meridian_cos"])
    d = pdata(ch, 0.0, 0.5)
    fd = d.fd
    assert (fd.E, fd.F, fd.G) == pytest.approx((1, 0, 1), abs=1e-14)
    assert (fd.L, fd.N) == pytest.approx((0, 0), abs=1e-14)
    # kappa_m = 1 for the unit circle profile, kappa = 1
    assert fd.M == pytest.approx(-1.0)
    cf = meridian_invariants_closed_form(MERIDIANS["meridian_cos"], ParamPoint(0.0, 0.5))
    assert (cf.k, cf.kappa, cf.K) == (-1.0, 0.0, 1.0)
    assert cf.H_norm == pytest.approx(math.sqrt(5) / 2)


def test_class_I_great_circle_is_planar():
    spec = MERIDIANS["meridian_great"]
    ch = meridian_surface(spec)
    pts = np.array([ch.position(p.u, p.v) for p in random_points(ch, 60, seed=2)])
    for p in random_points(ch, 20, seed=3):
        assert abs(pdata(ch, p.u, p.v).inv.k) <= 1e-12
    centered = pts - pts.mean(axis=0)
    normal = np.linalg.svd(centered)[2][-1]
    assert np.abs(centered @ normal).max() <= 1e-7


def test_class_II_linear_meridian():
    theta = 0.6
    prof = expr_profile(f"0.5 + u*{math.cos(theta)!r}", (0.0, 1.0))
    for curve in (small_circle(0.7), frenet_curve(lambda v: 0.4 + 0.2 * v, (0.0, 2.0))):
        spec = MeridianSpec(curve, prof)
        ch = meridian_surface(spec)
        for p in random_points(ch, 10):
            inv = pdata(ch, p.u, p.v).inv
            assert max(abs(inv.k), abs(inv.kappa), abs(inv.K)) <= 1e-12


@pytest.mark.parametrize("name", ["meridian_cos", "meridian_poly", "meridian_cmc", "meridian_cosh"])
def test_class_III_parameter_lines(name):
    ch = meridian_surface(MERIDIANS[name])
    for p in random_points(ch, 10):
        d = pdata(ch, p.u, p.v)
        assert abs(d.fd.F) <= 1e-12
        assert abs(d.fd.L) <= 1e-12 and abs(d.fd.N) <= 1e-12
        assert d.inv.k < 0


@pytest.mark.parametrize("name", ["meridian_cos", "meridian_poly", "meridian_k"])
def test_meridian_derivative_formulas(name):
    spec = MERIDIANS[name]
    prof = spec.profile
    h = 1e-5
    ch = meridian_surface(spec)
    for p in random_points(ch, 6, seed=4):
        u, v = p.u, p.v
        f, fd, fdd, _, gd, _ = prof.full(u)
        kap = spec.curve.frame(v)[3]
        km = -fdd / gd
        x, y, n1, n2 = meridian_frame(spec, u, v)
        assert np.linalg.det(np.column_stack([x, y, n1, n2])) == pytest.approx(1.0)
        du = [(a - b) / (2 * h) for a, b in zip(meridian_frame(spec, u + h, v), meridian_frame(spec, u - h, v))]
        dv = [(a - b) / (2 * h * f) for a, b in zip(meridian_frame(spec, u, v + h), meridian_frame(spec, u, v - h))]
        checks = [
            (du[0], km * n2),                                       # D_x x
            (du[1], 0 * x),                                         # D_x y
            (dv[0], fd / f * y),                                    # D_y x
            (dv[1], -fd / f * x + kap / f * n1 + gd / f * n2),      # D_y y
            (du[2], 0 * x),                                         # D_x n1
            (dv[2], -kap / f * y),                                  # D_y n1
            (du[3], -km * x),                                       # D_x n2
            (dv[3], -gd / f * y),                                   # D_y n2
        ]
        for got, want in checks:
            assert np.abs(got - want).max() <= 1e-5


@pytest.mark.parametrize("name", list(MERIDIANS))
def test_meridian_closed_form_matches_pipeline(name):
    spec = MERIDIANS[name]
    ch = meridian_surface(spec)
    for p in random_points(ch, 20, seed=6):
        inv = pdata(ch, p.u, p.v).inv
        cf = meridian_invariants_closed_form(spec, p)
        for a, b in ((inv.k, cf.k), (inv.K, cf.K), (inv.H_norm, cf.H_norm)):
            assert a == pytest.approx(b, rel=1e-6, abs=1e-12)
        assert np.allclose(inv.H, cf.H, atol=1e-10)
        assert meridian_H_norm(spec, p) == pytest.approx(inv.H_norm, rel=1e-10)
        assert abs(inv.kappa) <= 1e-12


def test_meridian_errors():
    with pytest.raises(InvalidProfile):
        meridian_surface(MeridianSpec(small_circle(1.0), profile_from_derivs(
            "steep", lambda u: (1.0 + 2 * u, 2.0, 0.0), (0.0, 1.0), check=False)))
    spec = MeridianSpec(small_circle(1.0), profile_from_derivs(
        "through0", lambda u: (0.5 * u, 0.5, 0.0), (-1.0, 1.0), check=False))
    with pytest.raises(PoleOfProfile):
        meridian_invariants_closed_form(spec, ParamPoint(0.0, 0.3))


def test_rotational_M_vanishes_and_LMN():
    for name, spec in ROTATIONAL.items():
        ch = rotational_surface(spec)
        for p in random_points(ch, 20, seed=8):
            fd = pdata(ch, p.u, p.v).fd
            L, M, N = rotational_LMN_closed_form(spec, p.u)
            assert abs(fd.M) <= 1e-12 * (1 + abs(fd.L) + abs(fd.N))
            assert fd.L == pytest.approx(L, rel=1e-6, abs=1e-14)
            assert fd.N == pytest.approx(N, rel=1e-6, abs=1e-14)


def test_rotational_case_values():
    for p in random_points(rotational_surface(rotational_case(1, a=0.7)), 10):
        inv = pdata(rotational_surface(rotational_case(1, a=0.7)), p.u, p.v).inv
        assert max(abs(inv.k), abs(inv.kappa), abs(inv.K)) <= 1e-12
    spec = ROTATIONAL["rot_case2"]
    inv = rotational_invariants_closed_form(spec, ParamPoint(1.0, 0.3))
    assert inv.k == pytest.approx(0.0, abs=1e-15) and abs(inv.kappa) > 1e-3 and abs(inv.K) > 1e-3
    # f = u, g = u^4 (alpha=1, beta=2, c=1) at u = 1: hand-substituted values
    kappa, K = rotational_case3_closed_form(1.0, 2.0, 1.0, 1.0)
    assert kappa == pytest.approx(72 / 1445, rel=1e-14)
    assert K == pytest.approx(-36 / 425, rel=1e-14)


def test_rotational_closed_form_matches_pipeline():
    for name, spec in ROTATIONAL.items():
        ch = rotational_surface(spec)
        for p in random_points(ch, 20, seed=12):
            inv = pdata(ch, p.u, p.v).inv
            cf = rotational_invariants_closed_form(spec, p)
            s = 1e-12 * (1 + abs(cf.k) + abs(cf.kappa) + abs(cf.K))
            assert inv.k == pytest.approx(cf.k, rel=1e-6, abs=s)
            assert inv.kappa == pytest.approx(cf.kappa, rel=1e-6, abs=s)
            assert inv.K == pytest.approx(cf.K, rel=1e-6, abs=s)
            assert np.allclose(inv.H, cf.H, atol=1e-10)


def test_rotational_spec_errors():
    with pytest.raises(InvalidSpec):
        rotational_from_expr("u", "u", 0.0, 1.0)
    with pytest.raises(SpecError):
        rotational_from_expr("u", "u +", 1.0, 1.0)


def spectral_frenet(spec, u0, n=64):
    """Frenet curvatures of v -> z(u0, v) per unit of v, from FFT derivatives of samples."""
    ch = rotational_surface(spec)
    v = 2 * math.pi * np.arange(n) / n
    c = np.array([ch.position(u0, t) for t in v])
    k = np.fft.fftfreq(n, 1.0 / n)
    C = np.fft.fft(c, axis=0)
    D = []
    for m in range(1, 5):
        w = (1j * k) ** m
        if m % 2:
            w[n // 2] = 0
        D.append(np.real(np.fft.ifft(w[:, None] * C, axis=0))[0])
    Q, R = np.linalg.qr(np.column_stack(D))
    s = np.sign(np.diag(R))
    s[3] = s[3] if s[3] != 0 else 1
    Q, R = Q * s, (R.T * s).T
    if np.linalg.det(Q) < 0:
        R[3] = -R[3]
    speed = R[0, 0]
    k1 = R[1, 1] / speed ** 2
    k2 = R[2, 2] / (speed * R[1, 1])
    k3 = R[3, 3] / (speed * R[2, 2])
    return speed * k1, speed * k2, speed * k3


def test_frenet_curvatures_example():
    spec = rotational_from_expr("1", "1", 1.0, 2.0, (0.5, 1.5, 0.0, 2 * math.pi))
    fc = frenet_curvatures_u_const(spec, 1.0)
    assert fc.kappa1 == pytest.approx(math.sqrt(17 / 5))
    assert fc.tau == pytest.approx(-6 / math.sqrt(85))
    assert fc.sigma == pytest.approx(2 * math.sqrt(5) / math.sqrt(17))
    k1, k2, k3 = spectral_frenet(spec, 1.0)
    assert k1 == pytest.approx(fc.kappa1, abs=1e-5)
    # the sign of the second curvature depends on the orientation convention of the Frenet frame
    assert abs(k2) == pytest.approx(abs(fc.tau), abs=1e-5)
    assert abs(k3) == pytest.approx(abs(fc.sigma), abs=1e-5)


@pytest.mark.parametrize("u0", [0.7, 1.3])
def test_frenet_curvatures_general(u0):
    spec = ROTATIONAL["rot_general"]
    fc = frenet_curvatures_u_const(spec, u0)
    k1, k2, k3 = spectral_frenet(spec, u0)
    assert (k1, abs(k2), abs(k3)) == pytest.approx((fc.kappa1, abs(fc.tau), abs(fc.sigma)), abs=1e-5)


def test_equal_speeds_give_circles():
    spec = rotational_from_expr("cos(u)", "sin(u)", 2.0, 2.0, (0.2, 1.2, 0.0, 2 * math.pi))
    fc = frenet_curvatures_u_const(spec, 0.5)
    assert fc.tau == 0.0
    # a circle of radius r traversed at angular speed alpha has curvature alpha per unit v
    assert fc.kappa1 == pytest.approx(2.0)
    pts = np.array([rotational_surface(spec).position(0.5, t) for t in np.linspace(0, 6, 50)])
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0)


def test_degenerate_parallel():
    spec = rotational_from_expr("u", "u", 1.0, 2.0, (-1.0, 1.0, 0.0, 1.0))
    with pytest.raises(DegenerateCurve):
        frenet_curvatures_u_const(spec, 0.0)


def test_reference_catalog():
    cat = reference_surfaces()
    assert {"plane", "sphere", "clifford(1,1)", "wsq", "minimal_general"} <= set(cat)
    for p in random_points(cat["clifford(1,1)"], 10):
        inv = pdata(cat["clifford(1,1)"], p.u, p.v).inv
        assert (inv.k, inv.kappa, inv.K) == pytest.approx((-1, 0, 0), abs=1e-12)
    for p in random_points(cat["wsq"], 10):
        d = pdata(cat["wsq"], p.u, p.v)
        assert d.inv.H_norm <= 1e-12
        assert d.inv.K ** 2 - d.inv.kappa ** 2 == pytest.approx(0.0, abs=1e-9 * (1 + d.inv.K ** 2))


def test_build_chart_errors():
    for bad in ({}, {"family": "nope"}, {"family": "clifford", "domain": [0, 1]},
                {"family": "rotational", "params": {"f": "u"}}, {"family": "expr", "params": {"x": ["u", "v"]}}):
        with pytest.raises(SpecError):
            build_chart(bad)


def test_build_chart_meridian_ode_default_curve():
    ch = build_chart({"family": "meridian", "params": {"profile": {
        "kind": "cmc", "a": 1.0, "b": 1.0, "initial": [0.0, 0.8], "max_span": 0.3}}})
    inv = pdata(ch, 0.1, 0.2).inv
    assert inv.H_norm == pytest.approx(1.0, abs=1e-10)
