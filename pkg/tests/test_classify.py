import json
import math

import pytest

from surf4.classify import (EvaluationFailed, GridSpec, analyze_point, classify_point, classify_surface,
                            developable_check, sweep)
from surf4.directions import asymptotic_directions, first_form
from surf4.errors import InvalidSpec
from surf4.families import build_chart, clifford, plane, wsq
from surf4.jets import ParamPoint

from conftest import corpus

CORPUS = corpus()
TWO_PI = 2 * math.pi


def kind(chart, u, v):
    return analyze_point(chart, ParamPoint(u, v)).point_type.kind


def test_point_kinds():
    assert kind(plane(), 0.2, 0.3) == "flat"
    assert kind(wsq(), 0.0, 0.0) == "elliptic"
    assert kind(clifford(), 1.0, 1.0) == "hyperbolic"
    assert kind(CORPUS["rot_case2"], 1.0, 1.0) == "parabolic"


def test_grid_parse():
    g = GridSpec.parse("-1:1:3,0:2:2")
    assert [(p.u, p.v) for p in g.points()] == [(-1, 0), (-1, 2), (0, 0), (0, 2), (1, 0), (1, 2)]
    for bad in ("1:0:3,0:1:3", "0:1:1,0:1:3", "0:1,0:1:3", "a:b:c,0:1:2"):
        with pytest.raises(InvalidSpec):
            GridSpec.parse(bad)


def test_meridian_flat_normal_connection():
    v = classify_surface(CORPUS["meridian_cos"], GridSpec(-0.9, 0.9, 5, 0.1, 4.0, 5))
    assert v.flat_normal_connection == "yes"
    assert v.minimal == "no"
    assert v.counterexample_points["flat_normal_connection"] == []
    # every such point is hyperbolic with two orthogonal asymptotic directions
    for p in GridSpec(-0.9, 0.9, 5, 0.1, 4.0, 5).points():
        a = analyze_point(CORPUS["meridian_cos"], p)
        assert a.inv.k < -a.point_type.tau
        g1, g2 = asymptotic_directions(a.fd)
        assert abs(first_form(a.fd, g1, g2)) <= 1e-7


def test_wsq_minimal_superconformal():
    v = classify_surface(wsq(), GridSpec(-1, 1, 5, -1, 1, 5))
    assert (v.minimal, v.super_conformal, v.flat_normal_connection) == ("yes", "yes", "no")
    assert developable_check(v) == "no"


def test_plane_flat_only():
    v = classify_surface(plane(), GridSpec(-1, 1, 3, -1, 1, 3))
    assert v.flat_points_only == "yes"
    assert v.minimal == "no" and len(v.flat_points) == 9
    assert developable_check(v) == "yes"


def test_developable():
    assert developable_check(classify_surface(CORPUS["rot_case1"], GridSpec(0.6, 1.4, 4, 0, 6, 4))) == "yes"
    assert developable_check(classify_surface(clifford(), GridSpec(0, 6, 4, 0, 6, 4))) == "no"


def test_mixed_surface():
    spec = {"family": "piecewise_u", "params": {"split": 1.5,
            "left": {"family": "rotational_case3", "params": {"alpha": 1, "beta": 2, "c": 1},
                     "domain": [0.5, 1.5, 0, TWO_PI]},
            "right": {"family": "expr", "params": {"x": ["u", "v", "0", "0"]}, "domain": [1.5, 2.5, 0, TWO_PI]}}}
    ch = build_chart(spec)
    v = classify_surface(ch, GridSpec(0.6, 2.4, 7, 0.1, 6.0, 3))
    assert v.flat_points_only == "mixed"
    assert developable_check(v) == "mixed"
    flat_us = sorted({p.u for p in v.flat_points})
    assert flat_us == pytest.approx([1.5, 1.8, 2.1, 2.4])
    assert len(v.counterexample_points["flat_points_only"]) == 9
    d = v.as_dict()
    assert d["schema"] == 1 and d["flat_points_only"] == "mixed"
    json.dumps(d)


def test_evaluation_failure_reports_point():
    ch = clifford(domain=(0.0, 1.0, 0.0, 1.0))
    with pytest.raises(EvaluationFailed) as err:
        classify_surface(ch, GridSpec(0.0, 2.0, 3, 0.0, 1.0, 2))
    assert err.value.point.u == 2.0


def test_sweep_order_independent_of_threads(monkeypatch):
    ch = CORPUS["generic"]
    pts = GridSpec(-0.7, 0.7, 6, -0.7, 0.7, 6).points()
    serial = [s.analysis.inv.k for s in sweep(ch, pts)]
    monkeypatch.setenv("SURF4_THREADS", "4")
    threaded = [s.analysis.inv.k for s in sweep(ch, pts)]
    assert serial == threaded
