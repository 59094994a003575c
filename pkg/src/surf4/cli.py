"""surf4 command line: report, classify, figure, generate.

Exit codes: 0 success, 1 input error, 2 evaluation error, 3 ODE validity error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np

from .classify import EvaluationFailed, GridSpec, analyze_point, classify_surface, sweep
from .errors import (OutsideValidity, ProfileOutOfRange, SpecError, StepTooLarge, Surf4Error)
from .families import MeridianSpec, build_chart, meridian_surface, small_circle
from .forms import point_data
from .jets import ParamPoint, SurfaceChart, evaluate_jet
from .ode import ODEProfileSpec, integrate_profile, profile_chart_source
from .svg import figure_svg

EXIT_OK, EXIT_INPUT, EXIT_EVAL, EXIT_ODE = 0, 1, 2, 3

REPORT_FIELDS = ("u", "v", "E", "F", "G", "L", "M", "N", "k", "kappa", "K", "H_norm",
                 "nu_hi", "nu_lo", "point_type", "indicatrix_kind", "ellipse_kind", "a", "b", "error")


class InputError(Exception):
    pass


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def load_chart(path: str) -> SurfaceChart:
    spec = _load_json(path)
    try:
        return build_chart(spec)
    except (SpecError, ProfileOutOfRange) as exc:
        raise InputError(str(exc)) from exc


def check_grid(chart: SurfaceChart, grid: GridSpec) -> None:
    u0, u1, v0, v1 = chart.domain
    mu = mv = 0.0
    if chart.jet_mode == "fd":
        mu, mv = 2 * chart.fd_steps[2], 2 * chart.fd_steps[3]
    if grid.u_min < u0 + mu or grid.u_max > u1 - mu or grid.v_min < v0 + mv or grid.v_max > v1 - mv:
        raise InputError(f"grid {grid.as_dict()} leaves the chart domain {list(chart.domain)}"
                         + (" (with finite-difference margin)" if chart.jet_mode == "fd" else ""))


def parse_point(text: str) -> ParamPoint:
    try:
        u, v = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad point {text!r}: expected u,v") from exc
    return ParamPoint(u, v)


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


# ------------------------------------------------------------ report

def report_rows(chart: SurfaceChart, grid: GridSpec, tau=None) -> list[dict]:
    rows = []
    for s in sweep(chart, grid.points(), tau):
        row = dict.fromkeys(REPORT_FIELDS)
        row["u"], row["v"] = s.point.u, s.point.v
        if s.error is not None:
            row["error"] = f"{type(s.error).__name__}: {s.error}"
        else:
            a = s.analysis
            fd, inv = a.fd, a.inv
            row.update(E=fd.E, F=fd.F, G=fd.G, L=fd.L, M=fd.M, N=fd.N, k=inv.k, kappa=inv.kappa,
                       K=inv.K, H_norm=inv.H_norm, nu_hi=inv.nu_hi, nu_lo=inv.nu_lo,
                       point_type=a.point_type.kind, indicatrix_kind=a.indicatrix.kind,
                       ellipse_kind=a.ellipse.kind, a=a.ellipse.a, b=a.ellipse.b)
        rows.append({k: (float(v) if isinstance(v, (float, np.floating)) else v) for k, v in row.items()})
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in rows:
        w.writerow(["" if r[k] is None else (repr(r[k]) if isinstance(r[k], float) else r[k])
                    for k in REPORT_FIELDS])
    return buf.getvalue()


def rows_to_json(chart: SurfaceChart, grid: GridSpec, rows) -> str:
    doc = {"schema": 1, "surface": chart.name, "jet_mode": chart.jet_mode,
           "grid": grid.as_dict(), "rows": rows}
    return json.dumps(doc, indent=1) + "\n"


def cmd_report(args) -> int:
    chart = load_chart(args.spec)
    grid = _grid(args)
    check_grid(chart, grid)
    rows = report_rows(chart, grid, args.tau)
    text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(chart, grid, rows)
    _write(text, args.out)
    bad = sum(r["error"] is not None for r in rows)
    if bad:
        print(f"surf4: {bad} of {len(rows)} grid points failed to evaluate", file=sys.stderr)
        return EXIT_EVAL
    return EXIT_OK


def _grid(args) -> GridSpec:
    if not args.grid:
        raise InputError("--grid is required")
    try:
        return GridSpec.parse(args.grid)
    except SpecError as exc:
        raise InputError(str(exc)) from exc


# ------------------------------------------------------------ classify

def cmd_classify(args) -> int:
    chart = load_chart(args.spec)
    grid = _grid(args)
    check_grid(chart, grid)
    try:
        verdict = classify_surface(chart, grid, args.tau)
    except EvaluationFailed as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_EVAL
    doc = verdict.as_dict()
    doc["surface"] = chart.name
    _write(json.dumps(doc, indent=1) + "\n", args.out)
    return EXIT_OK


# ------------------------------------------------------------ figure

def cmd_figure(args) -> int:
    chart = load_chart(args.spec)
    if not args.point:
        raise InputError("--point is required")
    p = parse_point(args.point)
    try:
        a = analyze_point(chart, p, args.tau)
    except Surf4Error as exc:
        print(f"surf4: cannot evaluate at ({p.u}, {p.v}): {exc}", file=sys.stderr)
        return EXIT_EVAL
    if a.point_type.kind == "flat":
        print(f"surf4: ({p.u}, {p.v}) is a flat point; there is nothing to draw", file=sys.stderr)
        return EXIT_EVAL
    conic = a.indicatrix if args.what in ("indicatrix", "both") else None
    ell = a.ellipse if args.what in ("ellipse", "both") else None
    _write(figure_svg(conic, ell), args.out)
    return EXIT_OK


# ------------------------------------------------------------ generate

def _target(spec: ODEProfileSpec):
    p = spec.params
    if spec.kind == "constant_K":
        K0 = float(p["K"])
        return "K", K0, lambda inv: abs(inv.K - K0)
    a = float(p["a"])
    if spec.kind == "cmc":
        return "|H|", abs(a), lambda inv: abs(inv.H_norm - abs(a))
    return "k", -a * a, lambda inv: abs(inv.k + a * a)


def generated_surface(ip, spec: ODEProfileSpec) -> MeridianSpec:
    if spec.kind == "constant_K":
        curv = float(spec.params.get("curve_curvature", 1.0))
    else:
        curv = float(spec.params["b"])
    return MeridianSpec(small_circle(curv), profile_chart_source(ip))


def surface_residual(chart: SurfaceChart, us, vs, err) -> float:
    worst = 0.0
    for u in us:
        for v in vs:
            inv = point_data(evaluate_jet(chart, ParamPoint(float(u), float(v)))).inv
            worst = max(worst, err(inv))
    return worst


def cmd_generate(args) -> int:
    raw = _load_json(args.spec)
    try:
        spec = ODEProfileSpec.from_dict(raw)
    except SpecError as exc:
        raise InputError(str(exc)) from exc
    try:
        ip = integrate_profile(spec)
    except OutsideValidity as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_ODE
    except StepTooLarge as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_ODE
    _write(ip.to_csv(), args.out)

    ms = generated_surface(ip, spec)
    chart = meridian_surface(ms)
    name, target, err = _target(spec)
    stride = max(1, (len(ip.u_grid) - 1) // 40)
    us = ip.u_grid[::stride]
    vs = np.linspace(chart.domain[2], chart.domain[3], 4)[:3]
    res = surface_residual(chart, us, vs, err)
    fchart = chart.with_mode("fd")
    mu = 2 * fchart.fd_steps[2]
    inner = [u for u in us if chart.domain[0] + mu <= u <= chart.domain[1] - mu]
    vs_fd = [v for v in vs if chart.domain[2] + 2 * fchart.fd_steps[3] <= v]
    vs_fd = vs_fd or [0.5 * (chart.domain[2] + chart.domain[3])]
    res_fd = surface_residual(fchart, inner, vs_fd, err) if inner else math.nan
    line = (f"generate kind={spec.kind} nodes={len(ip.u_grid)} u=[{float(ip.u_grid[0])!r}, {float(ip.u_grid[-1])!r}] "
            f"stop={ip.stop_reason} property={name} target={target!r} "
            f"residual={res:.3e} residual_fd={res_fd:.3e}")
    print(line, file=sys.stderr if args.out in (None, "-") else sys.stdout)
    return EXIT_OK


# ------------------------------------------------------------ entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="surf4", description="Invariants of surfaces in R^4.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def common(p, grid=True):
        p.add_argument("--spec", required=True, help="surface spec JSON")
        if grid:
            p.add_argument("--grid", help="u0:u1:nu,v0:v1:nv")
        p.add_argument("--tau", type=float, default=None, help="zero threshold (default: scale-relative)")
        p.add_argument("--out", default=None, help="output path (default: stdout)")

    p = sub.add_parser("report", help="per-point invariants over a grid")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("classify", help="surface-level verdicts over a grid")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("figure", help="SVG of the indicatrix and/or curvature ellipse at a point")
    common(p, grid=False)
    p.add_argument("--point", help="u,v")
    p.add_argument("--what", choices=("indicatrix", "ellipse", "both"), default="both")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("generate", help="integrate a special meridian profile to CSV")
    p.add_argument("--spec", required=True, help="ODE profile spec JSON")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_generate)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OutsideValidity, StepTooLarge) as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_ODE
    except SpecError as exc:
        print(f"surf4: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
