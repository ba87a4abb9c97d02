"""Deterministic SVG rendering of domains, paths, weighted faces and regions."""
from __future__ import annotations

import math


def _num(x) -> str:
    s = "%.4f" % float(x)
    s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _log_color(w: float, lo: float, hi: float) -> str:
    """Light yellow for the cheapest faces to dark red for the most exposed."""
    if hi <= lo or w <= 0:
        f = 0.0
    else:
        f = (math.log(max(w, lo)) - math.log(lo)) / (math.log(hi) - math.log(lo))
    f = min(1.0, max(0.0, f))
    r = int(round(255 - 80 * f))
    g = int(round(245 - 215 * f))
    b = int(round(200 - 170 * f))
    return "#%02x%02x%02x" % (r, g, b)


class _Frame:
    def __init__(self, bbox, size, margin):
        x0, y0, x1, y1 = (float(v) for v in bbox)
        span = max(x1 - x0, y1 - y0, 1e-9)
        self.k = (size - 2 * margin) / span
        self.x0, self.y1, self.m = x0, y1, margin
        self.w = (x1 - x0) * self.k + 2 * margin
        self.h = (y1 - y0) * self.k + 2 * margin

    def pt(self, p) -> str:
        return "%s,%s" % (_num((float(p[0]) - self.x0) * self.k + self.m), _num((self.y1 - float(p[1])) * self.k + self.m))


def _ring_d(frame, ring) -> str:
    return "M" + " L".join(frame.pt(p) for p in ring) + " Z"


def _geom_rings(g):
    """Exterior and interior rings of a shapely geometry or a plain point list."""
    if hasattr(g, "geoms"):
        for sub in g.geoms:
            yield from _geom_rings(sub)
    elif hasattr(g, "exterior"):
        if not g.is_empty:
            yield list(g.exterior.coords)[:-1]
            for r in g.interiors:
                yield list(r.coords)[:-1]
    else:
        yield list(g)


def render_svg(domain, paths=(), faces=None, regions=(), points=(), size: int = 800, margin: int = 10) -> str:
    """``faces``: iterable of (polygon, weight); ``regions``: iterable of
    (geometry or point list, fill colour); ``paths``: point lists;
    ``points``: (point, label)."""
    fr = _Frame(domain.bbox, size, margin)
    out = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="%s" height="%s" viewBox="0 0 %s %s">'
        % (_num(fr.w), _num(fr.h), _num(fr.w), _num(fr.h))
    ]
    d = " ".join(_ring_d(fr, r) for r in domain.rings)
    out.append('<path d="%s" fill="#ffffff" fill-rule="evenodd" stroke="none"/>' % d)
    if faces:
        faces = list(faces)
        ws = [float(w) for _, w in faces if float(w) > 0]
        lo, hi = (min(ws), max(ws)) if ws else (1.0, 1.0)
        for poly, w in faces:
            out.append(
                '<path d="%s" fill="%s" stroke="#999999" stroke-width="0.2"/>'
                % (_ring_d(fr, poly), _log_color(float(w), lo, hi))
            )
    for geom, fill in regions:
        d = " ".join(_ring_d(fr, r) for r in _geom_rings(geom) if len(r) >= 3)
        if d:
            out.append('<path d="%s" fill="%s" fill-opacity="0.5" fill-rule="evenodd" stroke="none"/>' % (d, fill))
    out.append('<path d="%s" fill="none" stroke="#000000" stroke-width="1"/>' % " ".join(_ring_d(fr, r) for r in domain.rings))
    for path in paths:
        out.append(
            '<polyline points="%s" fill="none" stroke="#1f4fd1" stroke-width="2"/>' % " ".join(fr.pt(p) for p in path)
        )
    for p, label in points:
        x, y = fr.pt(p).split(",")
        out.append('<circle cx="%s" cy="%s" r="3" fill="#d11f1f"/>' % (x, y))
        if label:
            out.append('<text x="%s" y="%s" font-size="10">%s</text>' % (x, y, label))
    out.append("</svg>")
    return "\n".join(out) + "\n"
