import math

import numpy as np
import pytest

from surf4.families import (MeridianSpec, constant_K_derivs, expr_chart, expr_profile, great_circle,
                            meridian_surface, profile_from_derivs, reference_surfaces,
                            rotational_case, rotational_from_expr, rotational_surface, small_circle)
from surf4.jets import ParamPoint
from surf4.ode import ODEProfileSpec, integrate_profile, profile_chart_source


def random_points(chart, n, seed=0, shrink=0.05):
    """Uniform points in the chart domain, kept away from its edges."""
    rng = np.random.default_rng(seed)
    u0, u1, v0, v1 = chart.domain
    du, dv = shrink * (u1 - u0), shrink * (v1 - v0)
    us = rng.uniform(u0 + du, u1 - du, n)
    vs = rng.uniform(v0 + dv, v1 - dv, n)
    return [ParamPoint(float(u), float(v)) for u, v in zip(us, vs)]


def meridian_specs():
    cmc = integrate_profile(ODEProfileSpec("cmc", {"a": 1.0, "b": 1.0, "C": 0.0}, (0.0, 0.8), 1e-3, 0.5))
    kconst = integrate_profile(ODEProfileSpec("constant_k", {"a": 1.0, "b": 1.0, "C": 0.0, "branch": 1},
                                              (0.0, 0.8), 1e-3, 0.5))
    return {
        "meridian_cos": MeridianSpec(small_circle(1.0), expr_profile("cos(u)", (-1.0, 1.0))),
        "meridian_cosh": MeridianSpec(small_circle(0.5),
                                      profile_from_derivs("cosh", constant_K_derivs(-1.0, 1.0, 0.0), (0.0, 0.85))),
        "meridian_poly": MeridianSpec(small_circle(2.0), expr_profile("1 + 0.3*u - 0.2*u**2", (-0.8, 0.8))),
        "meridian_great": MeridianSpec(great_circle(), expr_profile("cos(u)", (-1.0, 1.0))),
        "meridian_cmc": MeridianSpec(small_circle(1.0), profile_chart_source(cmc)),
        "meridian_k": MeridianSpec(small_circle(1.0), profile_chart_source(kconst)),
    }


def rotational_specs():
    return {
        "rot_case2": rotational_case(2, alpha=1.0, beta=2.0, a=0.5, b=0.3),
        "rot_case3": rotational_case(3, alpha=1.0, beta=2.0, c=1.0),
        "rot_general": rotational_from_expr("u", "u**2 + 0.5", 1.0, 3.0, (0.5, 1.5, 0.0, 2 * math.pi)),
        "rot_trig": rotational_from_expr("2 + cos(u)", "sin(u) + 1.5", 2.0, 1.0, (0.2, 2.5, 0.0, 2 * math.pi)),
    }


GENERIC = ("u", "v", "u**2 + 0.5*u*v", "v**3/3 + u*v**2 - 0.3*u**2")


def corpus():
    """Every test surface as {name: chart}."""
    charts = dict(reference_surfaces())
    charts["generic"] = expr_chart(GENERIC, (-0.8, 0.8, -0.8, 0.8), name="generic")
    for name, spec in meridian_specs().items():
        charts[name] = meridian_surface(spec, name=name)
    for name, spec in rotational_specs().items():
        charts[name] = rotational_surface(spec)
    charts["rot_case1"] = rotational_surface(rotational_case(1, alpha=1.0, beta=2.0, a=0.7))
    return charts


MINIMAL = ("wsq", "minimal_general")
FLAT_NORMAL = ("clifford(1,1)", "clifford(1,2)", "meridian_cos", "meridian_cosh", "meridian_poly",
               "meridian_cmc", "meridian_k")


@pytest.fixture(scope="session")
def charts():
    return corpus()
