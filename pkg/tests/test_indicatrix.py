import math

import numpy as np
import pytest

from surf4.errors import FlatPoint
from surf4.families import clifford, plane, wsq
from surf4.forms import point_data
from surf4.indicatrix import axes_for, build_indicatrix, indicatrix_conjugate
from surf4.jets import ParamPoint, evaluate_jet

from conftest import corpus, random_points

CORPUS = corpus()


def conic_at(chart, u, v):
    d = point_data(evaluate_jet(chart, ParamPoint(u, v)))
    return d, build_indicatrix(d.inv, axes_for(d.fd), d.fd)


def test_wsq_circle():
    d, c = conic_at(wsq(), 0.0, 0.0)
    assert c.kind == "circle"
    assert c.axis_lengths == pytest.approx((2 / math.sqrt(8), 2 / math.sqrt(8)))
    assert c.epsilon_branches == (1,)
    # circle: conjugate iff orthogonal
    assert indicatrix_conjugate(c, (1, 0), (0, 1), d.fd)
    assert not indicatrix_conjugate(c, (1, 0), (1, 1), d.fd)


def test_clifford_rectangular_hyperbola():
    d, c = conic_at(clifford(), 0.5, 0.5)
    assert c.kind == "rectangular_hyperbola"
    assert c.axis_lengths == pytest.approx((2.0, 2.0))
    assert c.epsilon_branches == (1, -1)
    assert c.margin < 1e-12
    # the parameter directions are the asymptotes of the conic, hence self-conjugate
    assert indicatrix_conjugate(c, (1, 0), (1, 0), d.fd)
    assert indicatrix_conjugate(c, (0, 1), (0, 1), d.fd)


def test_case2_parallel_lines():
    ch = CORPUS["rot_case2"]
    for p in random_points(ch, 5):
        d = point_data(evaluate_jet(ch, p))
        c = build_indicatrix(d.inv, axes_for(d.fd), d.fd)
        assert c.kind == "parallel_lines"
        nz = max(abs(c.nu_hi), abs(c.nu_lo))
        assert c.line_separation == pytest.approx(2 / math.sqrt(nz))


def test_flat():
    d = point_data(evaluate_jet(plane(), ParamPoint(0, 0)))
    with pytest.raises(FlatPoint):
        build_indicatrix(d.inv, (), d.fd)
    c = build_indicatrix(d.inv, (), d.fd, allow_flat=True)
    assert c.kind == "undefined_flat"
    with pytest.raises(FlatPoint):
        indicatrix_conjugate(c, (1, 0), (0, 1), d.fd)


@pytest.mark.parametrize("name", [n for n in CORPUS if n not in ("plane", "sphere", "meridian_great", "rot_case1")])
def test_kind_invariants(name):
    ch = CORPUS[name]
    for p in random_points(ch, 10, seed=17):
        d = point_data(evaluate_jet(ch, p))
        c = build_indicatrix(d.inv, axes_for(d.fd), d.fd)
        s = abs(c.nu_hi) + abs(c.nu_lo)
        if c.kind == "circle":
            assert c.nu_hi - c.nu_lo <= 1e-6 * s
        if c.kind in ("hyperbola", "rectangular_hyperbola"):
            assert c.nu_hi * c.nu_lo < 0
            assert (c.kind == "rectangular_hyperbola") == (abs(c.nu_hi + c.nu_lo) <= 1e-6 * s)
        if c.axis_lengths is not None:
            assert c.axis_lengths == pytest.approx((2 / math.sqrt(abs(c.nu_hi)), 2 / math.sqrt(abs(c.nu_lo))))
        # points on the conic satisfy the implicit equation
        if c.kind in ("ellipse", "circle"):
            X, Y = 1 / math.sqrt(abs(c.nu_hi)) * math.cos(0.4), 1 / math.sqrt(abs(c.nu_lo)) * math.sin(0.4)
            assert c.implicit(X, Y) == pytest.approx(c.epsilon_branches[0])
