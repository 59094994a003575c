"""Static SVG figures of the tangent indicatrix and the curvature ellipse.

Output is plain text built from fixed-precision numbers, so identical
inputs give byte-identical files.
"""

from __future__ import annotations

import math

import numpy as np

from .ellipse import CurvatureEllipse, semi_axes
from .indicatrix import IndicatrixConic

SIZE = 600
HALF = SIZE / 2
PLOT = 260.0  # px from center to the edge of the plotted region


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _num(x: float) -> str:
    return f"{x:.6g}"


class Panel:
    def __init__(self, extent: float, title: str):
        self.extent = extent
        self.scale = PLOT / extent
        self.parts: list[str] = []
        self.title = title

    def xy(self, X, Y):
        return HALF + self.scale * X, HALF - self.scale * Y

    def polyline(self, pts, cls="curve", closed=False):
        if len(pts) < 2:
            return
        d = " ".join(f"{'M' if i == 0 else 'L'}{_f(x)},{_f(y)}"
                     for i, (x, y) in enumerate(self.xy(X, Y) for X, Y in pts))
        if closed:
            d += " Z"
        self.parts.append(f'<path class="{cls}" d="{d}"/>')

    def line(self, p, q, cls="axis", marker=False):
        (x1, y1), (x2, y2) = self.xy(*p), self.xy(*q)
        m = ' marker-end="url(#arrow)"' if marker else ""
        self.parts.append(f'<line class="{cls}" x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}"{m}/>')

    def text(self, X, Y, s, dx=4.0, dy=-4.0):
        x, y = self.xy(X, Y)
        self.parts.append(f'<text x="{_f(x + dx)}" y="{_f(y + dy)}">{s}</text>')

    def dot(self, X, Y, cls="point"):
        x, y = self.xy(X, Y)
        self.parts.append(f'<circle class="{cls}" cx="{_f(x)}" cy="{_f(y)}" r="3"/>')

    def render(self, ident: str, x_offset: int = 0) -> str:
        head = (f'<svg x="{x_offset}" y="0" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">'
                f'<clipPath id="clip-{ident}"><rect x="{_f(HALF - PLOT)}" y="{_f(HALF - PLOT)}" '
                f'width="{_f(2 * PLOT)}" height="{_f(2 * PLOT)}"/></clipPath>'
                f'<rect class="frame" x="0" y="0" width="{SIZE}" height="{SIZE}"/>'
                f'<text x="10" y="20">{self.title}</text>'
                f'<text x="10" y="{SIZE - 10}">scale: 1 unit = {_f(self.scale)} px</text>')
        body = f'<g clip-path="url(#clip-{ident})">' + "".join(self.parts) + "</g>"
        return head + body + "</svg>"


STYLE = ("<style>.frame{fill:white;stroke:#888}.axis{stroke:#999;stroke-width:1}"
         ".asym{stroke:#c66;stroke-dasharray:4 3}.curve{fill:none;stroke:#124;stroke-width:2}"
         ".vec{stroke:#a20;stroke-width:2}.seg{stroke:#062;stroke-width:3}.point{fill:#124}"
         "text{font:12px sans-serif}</style>"
         '<defs><marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="8" '
         'markerHeight="8" orient="auto"><path d="M0,0 L10,5 L0,10 Z" fill="#a20"/></marker></defs>')


def indicatrix_panel(conic: IndicatrixConic, n: int = 240) -> Panel:
    nh, nl = conic.nu_hi, conic.nu_lo
    rh = 1.0 / math.sqrt(abs(nh)) if nh != 0 else math.inf
    rl = 1.0 / math.sqrt(abs(nl)) if nl != 0 else math.inf
    finite = [r for r in (rh, rl) if math.isfinite(r)]
    kind = conic.kind
    extent = (1.25 if kind in ("ellipse", "circle") else 2.5) * max(finite)
    P = Panel(extent, f"indicatrix: {kind}  nu'={_num(nh)}  nu''={_num(nl)}")
    P.line((-extent, 0), (extent, 0))
    P.line((0, -extent), (0, extent))
    if kind in ("ellipse", "circle"):
        ts = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        P.polyline([(rh * math.cos(t), rl * math.sin(t)) for t in ts], closed=True)
    elif kind in ("hyperbola", "rectangular_hyperbola"):
        # both branches: eps = +1 opens along the nu' > 0 axis, eps = -1 along the other
        smax = math.acosh(max(2.0 * extent / min(finite), 1.0)) + 0.5
        ss = np.linspace(-smax, smax, n)
        pos_along_x = nh > 0
        for eps in (1, -1):
            for side in (1, -1):
                if (eps == 1) == pos_along_x:
                    pts = [(side * rh * math.cosh(s), rl * math.sinh(s)) for s in ss]
                else:
                    pts = [(rh * math.sinh(s), side * rl * math.cosh(s)) for s in ss]
                P.polyline(pts)
        slope = rl / rh
        P.line((-extent, -slope * extent), (extent, slope * extent), cls="asym")
        P.line((-extent, slope * extent), (extent, -slope * extent), cls="asym")
    elif kind == "parallel_lines":
        sep = conic.line_separation / 2.0
        if abs(nh) >= abs(nl):
            for s in (1, -1):
                P.polyline([(s * sep, -extent), (s * sep, extent)])
        else:
            for s in (1, -1):
                P.polyline([(-extent, s * sep), (extent, s * sep)])
    if math.isfinite(rh):
        P.text(min(rh, extent * 0.8), 0, f"2/sqrt|nu'| = {_num(2 * rh)}")
    if math.isfinite(rl):
        P.text(0, min(rl, extent * 0.8), f"2/sqrt|nu''| = {_num(2 * rl)}")
    return P


def ellipse_panel(ell: CurvatureEllipse, n: int = 240) -> Panel:
    h, u1, u2 = ell.center_n, ell.u1_n, ell.u2_n
    reach = float(np.linalg.norm(h)) + ell.a
    extent = 1.25 * max(reach, 1e-12)
    P = Panel(extent, f"curvature ellipse: {ell.kind}  a={_num(ell.a)}  b={_num(ell.b)}")
    P.line((-extent, 0), (extent, 0))
    P.line((0, -extent), (0, extent))
    P.text(extent * 0.85, 0, "e1")
    P.text(0, extent * 0.9, "e2")
    if ell.kind == "point":
        P.dot(h[0], h[1])
    elif ell.kind == "segment":
        d = ell.a * _major(u1, u2)
        P.line(tuple(h - d), tuple(h + d), cls="seg")
        P.text(*(h + d), "segment")
    else:
        ts = np.linspace(0.0, 2 * math.pi, n, endpoint=False)
        P.polyline([tuple(h + math.cos(t) * u1 + math.sin(t) * u2) for t in ts], closed=True)
    if np.linalg.norm(h) > 0:
        P.line((0.0, 0.0), tuple(h), cls="vec", marker=True)
        P.text(h[0], h[1], f"H (|H| = {_num(float(np.linalg.norm(h)))})")
    else:
        P.dot(0.0, 0.0)
        P.text(0.0, 0.0, "H = 0")
    return P


def _major(u1, u2):
    return semi_axes(u1, u2)[2]


def figure_svg(conic: IndicatrixConic | None, ell: CurvatureEllipse | None) -> str:
    panels = []
    if conic is not None:
        panels.append(("indicatrix", indicatrix_panel(conic)))
    if ell is not None:
        panels.append(("ellipse", ellipse_panel(ell)))
    width = SIZE * len(panels)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{SIZE}" '
           f'viewBox="0 0 {width} {SIZE}">', STYLE]
    for i, (ident, p) in enumerate(panels):
        out.append(p.render(ident, i * SIZE))
    out.append("</svg>\n")
    return "\n".join(out)
