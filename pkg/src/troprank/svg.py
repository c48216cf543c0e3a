"""SVG 1.1 drawings of plane subdivisions and their dual tropical curves.

Coordinates are converted to floats only here, for display.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from . import geometry as geo
from .errors import PreconditionError
from .subdivision import Subdivision, TropicalPolynomial, dual_complex

PANEL = 360
MARGIN = 30

COLORS = {
    geo.PolygonClass.TRIANGLE: "#dde8f5",
    geo.PolygonClass.PARALLELOGRAM: "#f7d794",
    geo.PolygonClass.PARALLEL_EVEN: "#c8e6c9",
    geo.PolygonClass.EVEN_NONPARALLEL: "#f4a6a6",
    geo.PolygonClass.ODD: "#d1c4e9",
}


def _fit(points, x0):
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y, 1.0)
    scale = (PANEL - 2 * MARGIN) / span

    def tr(p):
        return (x0 + MARGIN + (float(p[0]) - lo_x) * scale, MARGIN + (hi_y - float(p[1])) * scale)

    return tr


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def render(s: Subdivision, f: TropicalPolynomial | None = None, title: str | None = None) -> str:
    if s.n != 2:
        raise PreconditionError("only plane subdivisions can be drawn")
    width = 2 * PANEL if f is not None else PANEL
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{PANEL}" '
        f'viewBox="0 0 {width} {PANEL}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    tr = _fit(s.vertices, 0)
    out.append('<g id="subdivision" stroke="#333" stroke-width="1.5">')
    for i, cell in enumerate(s.cells):
        cls = s.cell_class(i)
        pts = s.cell_points(i)
        cyc = [pts[k] for k in geo.convex_cyclic_order(pts)]
        coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in map(tr, cyc))
        out.append(f'<polygon points="{coords}" fill="{COLORS[cls.kind]}" class="{cls.kind}">'
                   f"<title>cell {i}: {escape(str(cls))}</title></polygon>")
    for v in s.vertices:
        x, y = tr(v)
        out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3" fill="#333"/>')
    out.append("</g>")
    if f is not None:
        dc = dual_complex(s, f)
        pos = dc.positions
        tc = _fit(pos + [tuple(p[k] + 1 for k in range(2)) for p in pos], PANEL)
        ray_len = (PANEL - 2 * MARGIN) / 4
        out.append('<g id="curve" stroke="#1b4f72" fill="none">')
        for e in dc.edges:
            (x1, y1), (x2, y2) = tc(pos[e.cells[0]]), tc(pos[e.cells[1]])
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                       f'stroke-width="{1 + e.weight}"/>')
        for r in dc.rays:
            x1, y1 = tc(pos[r.cell])
            d = r.direction
            norm = max(abs(d[0]), abs(d[1]))
            x2 = x1 + ray_len * d[0] / norm
            y2 = y1 - ray_len * d[1] / norm
            out.append(f'<line x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                       f'stroke-width="{1 + r.weight}" class="ray"/>')
        for i, p in enumerate(pos):
            x, y = tc(p)
            fill = "#c0392b" if not s.cell_class(i).trivial else "#1b4f72"
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="3.5" fill="{fill}" stroke="none"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"

