"""Visibility polygons, visibility graphs and weak visibility of paths.

Two routes compute V(p):

* :func:`visibility_polygon` -- exact angular sweep over domain vertices that
  also returns the triangle fan with every side classified as fixed-endpoint or
  rotating.  All predicates are exact when ``p`` has rational coordinates.
* :func:`visibility_polygon_fast` -- float ray casting (three rays per vertex
  direction) vectorised with numpy.  Used where thousands of evaluations are
  needed (quadrature, weak visibility unions, grid oracles).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import (
    EXTERIOR,
    GeometryError,
    INTERIOR,
    Point,
    PolygonalDomain,
    cross,
    dot,
    foot_of_perpendicular,
    line_intersection,
    locate_point,
    on_segment,
    orient,
    segments_intersect,
    sub,
    vcross,
)

FIXED = "fixed"
ROTATING = "rotating"


@dataclass(frozen=True)
class FanSide:
    kind: str  # FIXED or ROTATING
    anchor: Point  # domain vertex the side ends at / rotates around
    end: Point  # endpoint on the base


@dataclass(frozen=True)
class FanTriangle:
    base: tuple  # (start, end) on one domain edge, counterclockwise seen from p
    base_edge: int
    right_side: FanSide  # side on the clockwise-first ray
    left_side: FanSide

    def area(self, p: Point) -> Fraction:
        return abs(Fraction(cross(p, self.base[0], self.base[1]))) / 2


@dataclass
class VisibilityPolygon:
    center: Point
    fan: list
    area: Fraction
    full: bool = True  # p interior: the fan closes around p

    def boundary(self) -> list:
        """Vertices of V(p) in counterclockwise order (duplicates removed)."""
        pts = []
        if not self.full:
            pts.append(self.center)
        for t in self.fan:
            for q in t.base:
                if not pts or pts[-1] != q:
                    pts.append(q)
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
        return pts

    def rotating_sides(self):
        """(anchor, base edge id, end point, owning triangle, which side) per rotating side."""
        out = []
        for t in self.fan:
            if t.right_side.kind == ROTATING:
                out.append((t.right_side.anchor, t.base_edge, t.right_side.end, t, "right"))
            if t.left_side.kind == ROTATING:
                out.append((t.left_side.anchor, t.base_edge, t.left_side.end, t, "left"))
        return out

    def signature(self):
        """Combinatorial type of the fan (constant over a decomposition cell)."""
        return tuple(
            (t.base_edge, t.right_side.kind, t.right_side.anchor, t.left_side.kind, t.left_side.anchor)
            for t in _canonical_rotation(self.fan)
        )


def _canonical_rotation(fan):
    if not fan:
        return fan
    keys = [(t.base_edge, t.right_side.anchor) for t in fan]
    k = min(range(len(fan)), key=lambda i: keys[i])
    return fan[k:] + fan[:k]


def _half(d) -> int:
    return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1


def _angle_cmp(u, v) -> int:
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return hu - hv
    c = vcross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


def visible_vertices(domain: PolygonalDomain, p: Point) -> list:
    return [v for v in domain.vertices if v != p and domain.segment_inside(p, v)]


def _local_cone(domain: PolygonalDomain, p: Point):
    """Predicate: direction d enters the open interior at p."""
    if p in domain.vertex_set:
        return lambda d: domain.in_cone_strict(p, d)
    for e in domain.edges:
        if on_segment(p, e.a, e.b):
            ed = sub(e.b, e.a)
            return lambda d, ed=ed: vcross(ed, d) > 0
    return lambda d: True


def _ray_first_hit(domain: PolygonalDomain, p: Point, d: Point):
    """Nearest edge hit by the open ray p + t d (t > 0) and the parameter t."""
    best_t = None
    best_e = None
    for e in domain.edges:
        a, b = e.a, e.b
        s = sub(b, a)
        den = vcross(d, s)
        if den == 0:
            continue
        ap = sub(a, p)
        t = Fraction(vcross(ap, s)) / den
        if t <= 0:
            continue
        u = Fraction(vcross(ap, d)) / den
        if u < 0 or u > 1:
            continue
        if best_t is None or t < best_t:
            best_t, best_e = t, e
    return best_t, best_e


def visibility_polygon(domain: PolygonalDomain, p: Point) -> VisibilityPolygon:
    """Exact V(p) with its triangle fan. p must lie in the closed domain."""
    p = (Fraction(p[0]), Fraction(p[1])) if not isinstance(p[0], int) or not isinstance(p[1], int) else p
    loc = locate_point(domain, p)
    if loc == EXTERIOR:
        raise GeometryError("point %r lies outside the domain" % (p,))
    vis = visible_vertices(domain, p)
    groups = {}
    dirs = []
    for v in vis:
        d = sub(v, p)
        found = None
        for key in dirs:
            if vcross(key, d) == 0 and dot(key, d) > 0:
                found = key
                break
        if found is None:
            dirs.append(d)
            groups[d] = [v]
        else:
            groups[found].append(v)
    dirs.sort(key=functools.cmp_to_key(_angle_cmp))
    for k in groups:
        groups[k].sort(key=lambda v: dot(sub(v, p), sub(v, p)))
    cone = _local_cone(domain, p) if loc != INTERIOR else (lambda d: True)
    fan = []
    m = len(dirs)
    for i in range(m):
        d1 = dirs[i]
        d2 = dirs[(i + 1) % m]
        if m == 1:
            break
        c = vcross(d1, d2)
        if c > 0:
            dm = (d1[0] + d2[0], d1[1] + d2[1])
        else:
            dm = (-d1[1], d1[0])
            if c == 0 and dot(d1, d2) > 0:
                continue
        if not cone(dm):
            continue
        t, e = _ray_first_hit(domain, p, dm)
        if e is None:
            continue
        a1 = line_intersection(p, (p[0] + d1[0], p[1] + d1[1]), e.a, e.b)
        a2 = line_intersection(p, (p[0] + d2[0], p[1] + d2[1]), e.a, e.b)
        a1 = _snap(a1, domain)
        a2 = _snap(a2, domain)
        right = _classify_side(domain, groups[d1], a1)
        left = _classify_side(domain, groups[d2], a2)
        fan.append(FanTriangle((a1, a2), e.index, right, left))
    area = sum((t.area(p) for t in fan), Fraction(0))
    return VisibilityPolygon(p, fan, area, loc == INTERIOR)


def _snap(q, domain):
    x, y = q
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    if isinstance(y, Fraction) and y.denominator == 1:
        y = int(y)
    return (x, y)


def _classify_side(domain, group, end) -> FanSide:
    if end in domain.vertex_set:
        return FanSide(FIXED, end, end)
    return FanSide(ROTATING, group[-1], end)


def visible_area(domain: PolygonalDomain, p: Point, exact: bool = True) -> float:
    """|V(p)|. ``exact=False`` uses float ray casting."""
    if exact:
        return float(visibility_polygon(domain, p).area)
    return polygon_area_float(visibility_polygon_fast(domain, p))


def sees(domain: PolygonalDomain, p: Point, q: Point) -> bool:
    """Closed visibility between two points of the domain."""
    return domain.segment_inside(p, q)


# ----------------------------------------------------------- visibility graph

@dataclass
class VisibilityGraph:
    vertices: list
    edges: set  # frozenset pairs of vertices

    def neighbours(self, v):
        return [next(iter(e - {v})) for e in self.edges if v in e]

    def has_edge(self, u, v) -> bool:
        return frozenset((u, v)) in self.edges


def visibility_graph(domain: PolygonalDomain) -> VisibilityGraph:
    cache = _cache(domain)
    if "vg" in cache:
        return cache["vg"]
    vs = domain.vertices
    edges = set()
    for i in range(len(vs)):
        for j in range(i + 1, len(vs)):
            if domain.segment_inside(vs[i], vs[j]):
                edges.add(frozenset((vs[i], vs[j])))
    g = VisibilityGraph(list(vs), edges)
    cache["vg"] = g
    return g


def _cache(domain) -> dict:
    c = getattr(domain, "_secluded_cache", None)
    if c is None:
        c = {}
        domain._secluded_cache = c
    return c


# --------------------------------------------------------- fast float route

class _FloatDomain:
    def __init__(self, domain: PolygonalDomain):
        self.A = np.array([[float(e.a[0]), float(e.a[1])] for e in domain.edges])
        self.B = np.array([[float(e.b[0]), float(e.b[1])] for e in domain.edges])
        self.S = self.B - self.A
        self.V = np.array([[float(v[0]), float(v[1])] for v in domain.vertices])
        self.scale = max(1.0, float(max(domain.bbox[2] - domain.bbox[0], domain.bbox[3] - domain.bbox[1])))


def _float_domain(domain) -> _FloatDomain:
    c = _cache(domain)
    if "float" not in c:
        c["float"] = _FloatDomain(domain)
    return c["float"]


def _nudge_inside(domain: PolygonalDomain, fd: _FloatDomain, p):
    """Move a boundary point a hair into the interior (float route only)."""
    px, py = float(p[0]), float(p[1])
    tol = 1e-9 * fd.scale
    d = fd.A - np.array([px, py])
    # distance to each edge
    ss = np.einsum("ij,ij->i", fd.S, fd.S)
    t = np.clip(-np.einsum("ij,ij->i", d, fd.S) / ss, 0.0, 1.0)
    proj = fd.A + fd.S * t[:, None]
    dd = np.hypot(proj[:, 0] - px, proj[:, 1] - py)
    close = np.nonzero(dd <= tol)[0]
    if len(close) == 0:
        return px, py
    # average of inward normals of touching edges
    nx = ny = 0.0
    for k in close:
        sx, sy = fd.S[k]
        ln = math.hypot(sx, sy)
        nx += -sy / ln
        ny += sx / ln
    ln = math.hypot(nx, ny)
    if ln < 1e-12:
        e = domain.edges[int(close[0])]
        sx, sy = float(e.b[0] - e.a[0]), float(e.b[1] - e.a[1])
        nx, ny, ln = -sy, sx, math.hypot(sx, sy)
    step = 1e-7 * fd.scale
    return px + step * nx / ln, py + step * ny / ln


def visibility_polygon_fast(domain: PolygonalDomain, p, nudge: bool = True) -> np.ndarray:
    """Float V(p) as a (k, 2) counterclockwise vertex array."""
    fd = _float_domain(domain)
    if nudge:
        px, py = _nudge_inside(domain, fd, p)
    else:
        px, py = float(p[0]), float(p[1])
    ang = np.arctan2(fd.V[:, 1] - py, fd.V[:, 0] - px)
    eps = 1e-9
    rays = np.concatenate([ang - eps, ang, ang + eps])
    D = np.stack([np.cos(rays), np.sin(rays)], axis=1)  # (k,2)
    AP = fd.A - np.array([px, py])  # (m,2)
    den = D[:, None, 0] * fd.S[None, :, 1] - D[:, None, 1] * fd.S[None, :, 0]  # (k,m)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (AP[None, :, 0] * fd.S[None, :, 1] - AP[None, :, 1] * fd.S[None, :, 0]) / den
        u = (AP[None, :, 0] * D[:, None, 1] - AP[None, :, 1] * D[:, None, 0]) / den
    ok = (np.abs(den) > 1e-15) & (t > 1e-12) & (u >= -1e-12) & (u <= 1 + 1e-12)
    t = np.where(ok, t, np.inf)
    tmin = t.min(axis=1)
    good = np.isfinite(tmin)
    order = np.argsort(rays[good], kind="stable")
    pts = np.stack([px + D[good, 0] * tmin[good], py + D[good, 1] * tmin[good]], axis=1)[order]
    return pts


def polygon_area_float(pts: np.ndarray) -> float:
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


# ------------------------------------------------------------ weak visibility

def path_sample_points(domain: PolygonalDomain, path, refinement: int = 1, chords: bool = True) -> list:
    """Path vertices, crossings with decomposition chords, plus refinement-1
    evenly spaced points on every resulting sub-segment (float pairs).
    ``chords=False`` skips the chord crossings (large domains)."""
    from .subdivision import decomposition_chords

    verts = list(path)
    if len(verts) == 1:
        return [(float(verts[0][0]), float(verts[0][1]))]
    chords = decomposition_chords(domain) if chords else []
    out = []
    for a, b in zip(verts, verts[1:]):
        ts = {Fraction(0), Fraction(1)}
        for c, d in chords:
            if segments_intersect(a, b, c, d):
                q = line_intersection(a, b, c, d)
                if q is not None:
                    ts.add(_param(a, b, q))
        ts = sorted(ts)
        ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
        for t0, t1 in zip(ts, ts[1:]):
            for k in range(refinement):
                t = float(t0) + (float(t1) - float(t0)) * k / refinement
                out.append((ax + t * (bx - ax), ay + t * (by - ay)))
    out.append((float(verts[-1][0]), float(verts[-1][1])))
    return out


def _param(a, b, q) -> Fraction:
    if a[0] != b[0]:
        return Fraction(q[0] - a[0]) / (b[0] - a[0])
    return Fraction(q[1] - a[1]) / (b[1] - a[1])


def weak_visibility_region(domain: PolygonalDomain, path, refinement: int = 4, chords: bool = True):
    """Sampled union of V(p) along the path, as a shapely geometry."""
    from shapely import union_all
    from shapely.geometry import Polygon

    polys = []
    for q in path_sample_points(domain, path, refinement, chords):
        pts = visibility_polygon_fast(domain, q)
        if len(pts) >= 3:
            poly = Polygon(pts)
            if not poly.is_valid:
                poly = poly.buffer(0)
            polys.append(poly)
    return union_all(polys)


def weak_visibility_area(domain: PolygonalDomain, path, refinement: int = 4, chords: bool = True) -> float:
    """Area seen from at least one sampled point of the path (lower bound on the
    true weakly visible area)."""
    return float(weak_visibility_region(domain, path, refinement, chords).area)
