import math

import numpy as np
import pytest

from surf4.ellipse import (classify_ellipse, curvature_ellipse, gauss_torsion_check, is_superconformal,
                           segment_diagnostics, semi_axes)
from surf4.errors import NotASegment
from surf4.families import clifford, plane, wsq
from surf4.forms import point_data
from surf4.jets import ParamPoint, evaluate_jet

from conftest import FLAT_NORMAL, MINIMAL, corpus, random_points

CORPUS = corpus()


def ell_at(chart, u, v):
    d = point_data(evaluate_jet(chart, ParamPoint(u, v)))
    return d, curvature_ellipse(d.jet, d.frame, d.dec, d.fd)


def test_wsq_circle():
    d, e = ell_at(wsq(), 0.0, 0.0)
    assert np.allclose(e.center, 0)
    assert np.allclose(np.abs(e.u1), [0, 0, 2, 0]) and np.allclose(np.abs(e.u2), [0, 0, 0, 2])
    assert (e.a, e.b) == pytest.approx((2.0, 2.0))
    assert e.kind == "circle" and is_superconformal(e)
    assert gauss_torsion_check(e, d.inv) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(NotASegment):
        segment_diagnostics(e, d.inv)


def test_clifford_segment():
    d, e = ell_at(clifford(), 2.0, 1.0)
    assert np.linalg.norm(e.center) == pytest.approx(math.sqrt(2) / 2)
    assert np.linalg.norm(e.u1) == pytest.approx(math.sqrt(2) / 2)
    assert np.linalg.norm(e.u2) == pytest.approx(0.0, abs=1e-15)
    assert e.kind == "segment" and not is_superconformal(e)
    assert (e.a, e.b) == pytest.approx((math.sqrt(2) / 2, 0.0))
    s = segment_diagnostics(e, d.inv)
    assert s.d == pytest.approx(math.sqrt(0.5))
    assert s.d_from_invariants == pytest.approx(math.sqrt(0.5))
    assert s.full_length == pytest.approx(2 * s.d)
    assert not s.collinear_with_H and s.orthogonal_to_H
    assert gauss_torsion_check(e, d.inv) == pytest.approx(0.0, abs=1e-14)


def test_plane_point():
    d, e = ell_at(plane(), 0.0, 0.0)
    assert e.kind == "point" and (e.a, e.b) == (0.0, 0.0)
    assert not is_superconformal(e)
    assert gauss_torsion_check(e, d.inv) == 0.0


def test_semi_axes_against_eigh():
    rng = np.random.default_rng(0)
    for _ in range(50):
        u1, u2 = rng.normal(size=2), rng.normal(size=2)
        a, b, d = semi_axes(u1, u2)
        M = np.column_stack([u1, u2])
        ev = np.linalg.eigvalsh(M.T @ M)
        assert (a, b) == pytest.approx((math.sqrt(ev[1]), math.sqrt(max(ev[0], 0))), rel=1e-10)
        # the farthest point of the curve lies along d at distance a
        ts = np.linspace(0, 2 * math.pi, 20001)
        pts = np.outer(np.cos(ts), u1) + np.outer(np.sin(ts), u2)
        far = pts[np.argmax(np.linalg.norm(pts, axis=1))]
        assert abs(abs(far @ d) - a) < 1e-6


def test_classify_thresholds():
    assert classify_ellipse(1e-9, 0.0, 1e-7) == "point"
    assert classify_ellipse(1.0, 1e-9, 1e-7) == "segment"
    assert classify_ellipse(1.0, 1.0 - 1e-8, 1e-7) == "circle"
    assert classify_ellipse(1.0, 0.5, 1e-7) == "ellipse"


@pytest.mark.parametrize("name", list(CORPUS))
def test_ellipse_properties(name):
    ch = CORPUS[name]
    for p in random_points(ch, 10, seed=23):
        d = point_data(evaluate_jet(ch, p))
        e = curvature_ellipse(d.jet, d.frame, d.dec, d.fd)
        f = d.frame
        for w in (e.u1, e.u2, e.center):
            assert abs(w @ f.x) < 1e-10 * (1 + np.linalg.norm(w)) and abs(w @ f.y) < 1e-10 * (1 + np.linalg.norm(w))
        assert np.allclose(e.center, d.inv.H, atol=1e-12 * (1 + np.linalg.norm(e.center)))
        assert abs(gauss_torsion_check(e, d.inv)) <= 1e-6 * (1 + abs(d.inv.kappa))
        assert e.a >= e.b >= 0
        # sigma(v, v) for unit v at angle psi lands on the ellipse
        j = d.jet
        psi = 0.7
        v = math.cos(psi) * f.x + math.sin(psi) * f.y
        ab = np.linalg.lstsq(np.column_stack([j.z_u, j.z_v]), v, rcond=None)[0]
        w = ab[0] ** 2 * j.z_uu + 2 * ab[0] * ab[1] * j.z_uv + ab[1] ** 2 * j.z_vv
        sig = w - (w @ f.x) * f.x - (w @ f.y) * f.y
        assert np.allclose(sig, e.point(psi), atol=1e-9 * (1 + np.linalg.norm(sig)))
        if name in MINIMAL:
            assert np.linalg.norm(e.center) <= 1e-8 * (1 + e.a)
        if name in FLAT_NORMAL:
            assert e.kind == "segment"
            s = segment_diagnostics(e, d.inv)
            assert s.d == pytest.approx(s.d_from_invariants, abs=1e-6)
            assert not s.collinear_with_H
