"""Piecewise-constant approximation of the visible-area function.

Inside a cell of the refined visibility decomposition,

    |V(p)| = C + sum(+delta) - sum(-delta)

where every rotating fan side (anchor r', base edge e) contributes the signed
area of the triangle spanned by r', its foot R on the base line and the point r
where the side meets the base.  In the frame of (r', e) that area is
h^2/2 * |x|/y, whose level sets are rays out of r'.  Overlaying those rays for a
geometric sequence of levels gives faces on which a constant weight is within
a (1 +- 2 eps) factor of |V(p)|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .geometry import (
    GeometryError,
    Point,
    PolygonalDomain,
    _ear_clip,
    cross,
    dot,
    foot_of_perpendicular,
    line_intersection,
    orient,
    point_in_ring,
    sub,
    vcross,
)
from .subdivision import (
    Subdivision,
    _extend,
    build_arrangement,
    decomposition_chords,
    interior_point,
    is_convex,
    locate,
    visibility_decomposition,
)
from .visibility import _cache, visibility_polygon


# ----------------------------------------------------------- closed forms

def _line_frame(base_line):
    a, b = base_line
    ax, ay, bx, by = map(float, (a[0], a[1], b[0], b[1]))
    ln = math.hypot(bx - ax, by - ay)
    if ln == 0:
        raise GeometryError("degenerate base line")
    return (ax, ay), ((bx - ax) / ln, (by - ay) / ln)


def _hit_base(p, anchor, base_line):
    o, u = _line_frame(base_line)
    px, py = float(p[0]), float(p[1])
    dx, dy = float(anchor[0]) - px, float(anchor[1]) - py
    den = dx * u[1] - dy * u[0]
    if abs(den) < 1e-15:
        raise GeometryError("ray from p through the anchor is parallel to the base line")
    t = ((o[0] - px) * u[1] - (o[1] - py) * u[0]) / den
    return px + t * dx, py + t * dy


def rotating_triangle_area(p: Point, r_anchor: Point, q_anchor: Point, base_line) -> float:
    """Area of the triangle cut from the base line by the rays from p through
    the two anchors (height of p times the base length, halved)."""
    o, u = _line_frame(base_line)
    height = abs((float(p[0]) - o[0]) * u[1] - (float(p[1]) - o[1]) * u[0])
    if height == 0:
        return 0.0
    r = _hit_base(p, r_anchor, base_line)
    q = _hit_base(p, q_anchor, base_line)
    return height * math.hypot(r[0] - q[0], r[1] - q[1]) / 2


def _to_frame(p, origin, u):
    dx, dy = float(p[0]) - origin[0], float(p[1]) - origin[1]
    return dx * u[0] + dy * u[1], -dx * u[1] + dy * u[0]


def level_curve_abscissa(A: float, r_anchor: Point, q_anchor: Point, base_line, y: float) -> float:
    """x(y) on the curve where the rotating triangle has area A.

    Frame: the base line is the x-axis (positive y towards the anchors) and
    the origin is the foot of ``q_anchor``, so ``q_anchor = (0, d)`` and
    ``r_anchor = (a, b)``.
    """
    o, u = _line_frame(base_line)
    qx, qy = _to_frame(q_anchor, o, u)
    if qy < 0:
        u = (-u[0], -u[1])
        qx, qy = _to_frame(q_anchor, o, u)
    origin = (o[0] + qx * u[0], o[1] + qx * u[1])
    a, b = _to_frame(r_anchor, origin, u)
    d = qy
    if y == b or y == d:
        raise GeometryError("level curve undefined at the anchor heights")
    return (2 * A / y ** 2 + a / (y - b)) / (1 / (y - b) - 1 / (y - d))


def level_curve_point(A, r_anchor, q_anchor, base_line, y):
    """World coordinates of the level-curve point at local height y."""
    o, u = _line_frame(base_line)
    qx, qy = _to_frame(q_anchor, o, u)
    if qy < 0:
        u = (-u[0], -u[1])
        qx, qy = _to_frame(q_anchor, o, u)
    x = level_curve_abscissa(A, r_anchor, q_anchor, base_line, y)
    ox, oy = o[0] + qx * u[0], o[1] + qx * u[1]
    return (ox + x * u[0] - y * u[1], oy + x * u[1] + y * u[0])


@dataclass(frozen=True)
class AnchorFrame:
    """Local frame at an anchor vertex: x along the base edge, y away from it."""

    anchor: Point
    base: tuple  # (a, b) of the base edge, interior to the left

    def __post_init__(self):
        if self.h2 <= 0:
            raise GeometryError("anchor lies on the base line")

    @property
    def s(self):
        return sub(self.base[1], self.base[0])

    @property
    def normal(self):
        s = self.s
        return (-s[1], s[0])

    @property
    def h2(self) -> Fraction:
        s = self.s
        c = vcross(s, sub(self.anchor, self.base[0]))
        return Fraction(c * c, dot(s, s)) if c > 0 else Fraction(-1)

    @property
    def h(self) -> float:
        return math.sqrt(self.h2)

    def local(self, p):
        s = self.s
        ln = math.sqrt(dot(s, s))
        dx, dy = float(p[0]) - float(self.anchor[0]), float(p[1]) - float(self.anchor[1])
        return (dx * s[0] + dy * s[1]) / ln, (dx * -s[1] + dy * s[0]) / ln

    def foot(self) -> Point:
        return foot_of_perpendicular(self.anchor, self.base[0], self.base[1])

    def direction(self, k: Fraction, side: int) -> Point:
        """Direction of the ray of constant x/y = side * k out of the anchor."""
        s, nv = self.s, self.normal
        return (side * k * s[0] + nv[0], side * k * s[1] + nv[1])


def anchor_delta(frame: AnchorFrame, p) -> float:
    """Area of the triangle anchor-foot-hit as seen from p: h^2/2 * x/y."""
    x, y = frame.local(p)
    if y <= 0:
        raise GeometryError("point is not beyond the anchor")
    return float(frame.h2) / 2 * abs(x) / y


# -------------------------------------------------------------- levels

@dataclass(frozen=True)
class LevelSequence:
    eps: float
    n: int
    L: int

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")

    @property
    def A1(self) -> float:
        return self.eps / (2 * self.n)

    @property
    def ratio(self) -> float:
        return 1 + self.eps

    @property
    def m(self) -> int:
        top = max(float(self.L) ** 2, self.A1)
        return max(1, math.ceil(math.log(top / self.A1) / math.log(self.ratio) - 1e-12) + 1)

    def value(self, i: int) -> float:
        return self.A1 * self.ratio ** (i - 1)

    def values(self) -> list:
        return [self.value(i) for i in range(1, self.m + 1)]

    def index_of(self, delta: float) -> int:
        """Least i with delta <= A_i (1 for small values)."""
        if delta <= self.A1:
            return 1
        i = math.ceil(math.log(delta / self.A1) / math.log(self.ratio)) + 1
        while i > 1 and delta <= self.value(i - 1):
            i -= 1
        while delta > self.value(i):
            i += 1
        return i


def curved_sector_weight(domain: PolygonalDomain, p, eps: float) -> float:
    """Pointwise sum of sector weights of all fan triangles (diagnostic)."""
    seq = LevelSequence(eps, domain.n, domain.L)
    vp = visibility_polygon(domain, p)
    return sum(seq.value(seq.index_of(float(t.area(vp.center)))) for t in vp.fan)


# ------------------------------------------------------- refinement / signs

def _rotating_pairs(domain, sub_: Subdivision):
    """(anchor, base edge id) pairs per face, from a sample point."""
    out = []
    for f in range(len(sub_.faces)):
        vp = visibility_polygon(domain, sub_.representative(f))
        out.append({(a, e) for a, e, *_ in vp.rotating_sides()})
    return out


def perpendicular_segments(domain: PolygonalDomain, pairs) -> list:
    segs = []
    for anchor, e in sorted(pairs):
        edge = domain.edges[e]
        s = sub(edge.b, edge.a)
        nv = (-s[1], s[0])
        up, _ = _extend(domain, anchor, nv)
        down, _ = _extend(domain, anchor, (-nv[0], -nv[1]))
        if up != down:
            segs.append((down, up))
    return segs


def refine_decomposition(domain: PolygonalDomain, vd: Subdivision | None = None) -> Subdivision:
    """Overlay the decomposition with the maximal perpendiculars dropped from
    every rotating anchor to the supporting line of its base edge."""
    c = _cache(domain)
    if "refined" in c and vd is None:
        return c["refined"]
    vd = vd or visibility_decomposition(domain)
    pairs = set().union(*_rotating_pairs(domain, vd)) if vd.faces else set()
    extra = perpendicular_segments(domain, pairs)
    refined = vd if not extra else build_arrangement(domain, list(decomposition_chords(domain)) + extra)
    refined.payload = [dict() for _ in refined.faces]
    c["refined"] = refined
    c["refined_pairs"] = pairs
    c["refined_extra"] = extra
    return refined


@dataclass
class CellTerms:
    C: float
    terms: list  # (AnchorFrame, sign) with sign +1 (added) or -1 (subtracted)

    @property
    def plus(self):
        return {f.anchor for f, s in self.terms if s > 0}

    @property
    def minus(self):
        return {f.anchor for f, s in self.terms if s < 0}

    def area_at(self, p) -> float:
        return self.C + sum(s * anchor_delta(f, p) for f, s in self.terms)


def side_terms(domain: PolygonalDomain, vp):
    """Exact signed area of each rotating side's correction triangle."""
    out = []
    for anchor, e, end, _tri, which in vp.rotating_sides():
        edge = domain.edges[e]
        F = foot_of_perpendicular(anchor, edge.a, edge.b)
        t = Fraction(cross(anchor, end, F)) / 2
        if which == "left":
            t = -t
        out.append((AnchorFrame(anchor, (edge.a, edge.b)), t))
    return out


def cell_constant_and_signs(domain: PolygonalDomain, cell_polygon) -> CellTerms:
    """C and the added/subtracted anchors of a refined cell, read off a point
    strictly inside it."""
    p = interior_point(cell_polygon)
    vp = visibility_polygon(domain, p)
    terms = side_terms(domain, vp)
    C = vp.area - sum((t for _, t in terms), Fraction(0))
    return CellTerms(float(C), [(f, 1 if t >= 0 else -1) for f, t in terms])


# ----------------------------------------------------------- level rays

def _clip_ray_convex(origin, d, poly):
    """Parameter interval of origin + t d (t >= 0) inside a convex CCW polygon."""
    lo, hi = Fraction(0), None
    m = len(poly)
    for i in range(m):
        u, v = poly[i], poly[(i + 1) % m]
        e = sub(v, u)
        c0 = vcross(e, sub(origin, u))
        c1 = vcross(e, d)
        if c1 == 0:
            if c0 < 0:
                return None
            continue
        t = Fraction(-c0) / c1
        if c1 > 0:
            lo = max(lo, t)
        else:
            hi = t if hi is None else min(hi, t)
    if hi is None or hi <= lo:
        return None
    return lo, hi


def _pt(origin, d, t):
    x = origin[0] + t * d[0]
    y = origin[1] + t * d[1]
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    if isinstance(y, Fraction) and y.denominator == 1:
        y = int(y)
    return (x, y)


def _level_slopes(frame: AnchorFrame, seq: LevelSequence):
    """Per side of the foot: list of (exact slope k, level value) to draw."""
    edge_a, edge_b = frame.base
    xa = frame.local(edge_a)[0]
    xb = frame.local(edge_b)[0]
    h = frame.h
    h2 = frame.h2
    out = {}
    for side in (1, -1):
        # p on this side puts the hit point r on the opposite side of the foot
        lo_x, hi_x = min(xa, xb), max(xa, xb)
        if side > 0:
            a, b = max(0.0, -hi_x), -lo_x
        else:
            a, b = max(0.0, lo_x), hi_x
        if b <= 0 or b < a:
            continue
        dmin, dmax = h * a / 2, h * b / 2
        i0 = max(1, seq.index_of(dmin) - 1)
        i1 = min(seq.m, seq.index_of(dmax))
        levels = []
        for i in range(i0, i1 + 1):
            k = Fraction(2 * seq.value(i) / float(h2)).limit_denominator(10 ** 6)
            if k <= 0:
                continue
            levels.append((k, float(k * h2 / 2)))
        out[side] = levels
    return out


def _delta_range(frame: AnchorFrame, poly, cap: float):
    """Range of the correction area over a convex cell (attained at vertices)."""
    vals = []
    for q in poly:
        x, y = frame.local(q)
        vals.append(cap if y <= 1e-12 else min(cap, float(frame.h2) / 2 * abs(x) / y))
    return min(vals), max(vals)


def level_ray_segments(domain, frame: AnchorFrame, seq: LevelSequence, cells) -> list:
    """Level rays of one (anchor, base) pair clipped to the given convex cells.

    Only the levels whose value falls inside the range the correction area
    takes over a cell are drawn there; the others would not cut the cell.
    """
    segs = []
    slopes = _level_slopes(frame, seq)
    xa, xb = frame.local(frame.base[0])[0], frame.local(frame.base[1])[0]
    cap = frame.h * max(abs(xa), abs(xb)) / 2
    for poly in cells:
        lo, hi = _delta_range(frame, poly, cap)
        for side, levels in slopes.items():
            for k, A in levels:
                if A < lo * (1 - 1e-9) or A > hi * (1 + 1e-9):
                    continue
                d = frame.direction(k, side)
                iv = _clip_ray_convex(frame.anchor, d, poly)
                if iv is not None:
                    segs.append((_pt(frame.anchor, d, iv[0]), _pt(frame.anchor, d, iv[1])))
    return segs


# ------------------------------------------------------ weighted overlay

@dataclass
class WeightedSubdivision:
    sub: Subdivision
    weights: list
    cells: Subdivision  # refined decomposition
    cell_terms: list  # CellTerms per refined cell
    face_cell: list  # refined cell per face
    levels: LevelSequence
    pair_levels: dict = field(default_factory=dict)  # (anchor, base) -> side -> [(k, A)]

    @property
    def eps(self) -> float:
        return self.levels.eps

    def weight_of_face(self, f: int) -> float:
        return self.weights[f]

    def face_count(self) -> int:
        return len(self.sub.faces)


def _sector_value(levels_by_side, frame, p, seq) -> float:
    """Weight of the sector of p for one anchor: the first drawn level >= delta."""
    x, y = frame.local(p)
    delta = float(frame.h2) / 2 * abs(x) / y if y > 0 else 0.0
    for _, A in levels_by_side.get(1 if x >= 0 else -1, ()):
        if delta <= A:
            return A
    return seq.value(seq.index_of(delta))


def build_weighted_subdivision(domain: PolygonalDomain, eps: float) -> WeightedSubdivision:
    if not eps > 0:
        raise ValueError("eps must be positive")
    key = ("ws", float(eps))
    c = _cache(domain)
    if key in c:
        return c[key]
    seq = LevelSequence(float(eps), domain.n, domain.L)
    vd = visibility_decomposition(domain)
    per_face_pairs = _rotating_pairs(domain, vd)
    refined = refine_decomposition(domain)
    extra = c.get("refined_extra", [])
    cell_terms = [cell_constant_and_signs(domain, refined.face_polygon(f)) for f in range(len(refined.faces))]

    pair_cells = {}
    for f, pairs in enumerate(per_face_pairs):
        for pr in pairs:
            pair_cells.setdefault(pr, []).append(vd.face_polygon(f))
    rays = []
    pair_levels = {}
    frames = {}
    for (anchor, e) in sorted(pair_cells):
        edge = domain.edges[e]
        fr = AnchorFrame(anchor, (edge.a, edge.b))
        frames[(anchor, e)] = fr
        pair_levels[(anchor, (edge.a, edge.b))] = _level_slopes(fr, seq)
        rays.extend(level_ray_segments(domain, fr, seq, pair_cells[(anchor, e)]))

    segments = list(decomposition_chords(domain)) + list(extra) + rays
    final = build_arrangement(domain, segments) if (rays or extra) else refined
    # split any non-convex face into convex pieces
    diagonals = []
    for f in range(len(final.faces)):
        poly = final.face_polygon(f)
        if not is_convex(poly):
            for a, b, cc in _ear_clip(poly):
                diagonals.extend([(a, cc)])
    if diagonals:
        final = build_arrangement(domain, segments + diagonals)

    weights = []
    face_cell = []
    for f in range(len(final.faces)):
        p = final.representative(f)
        cid = locate(refined, p)
        face_cell.append(cid)
        ct = cell_terms[cid]
        w = ct.C
        for fr, sgn in ct.terms:
            lv = pair_levels.get((fr.anchor, fr.base), {})
            w += sgn * _sector_value(lv, fr, p, seq)
        weights.append(w)
    final.payload = [{"weight": w} for w in weights]
    ws = WeightedSubdivision(final, weights, refined, cell_terms, face_cell, seq, pair_levels)
    c[key] = ws
    return ws


def weight_at(ws: WeightedSubdivision, p) -> float:
    return ws.weights[locate(ws.sub, p)]
