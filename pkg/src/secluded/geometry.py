"""Exact geometric kernel: predicates, polygonal domains, point location and
triangulation.

Coordinates are plain Python numbers. Domain vertices are ints; constructed
points (segment intersections, feet of perpendiculars) are ``Fraction``s, so
every predicate below is exact as long as no float sneaks in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Point = tuple  # (x, y)

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


class GeometryError(ValueError):
    """Invalid geometric input (non-simple ring, hole outside, ...)."""


# ---------------------------------------------------------------- predicates

def cross(o: Point, a: Point, b: Point):
    """Twice the signed area of triangle oab."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def orient(a: Point, b: Point, c: Point) -> int:
    ax, ay = a
    bx, by = b
    cx, cy = c
    if type(ax) is int and type(ay) is int and type(bx) is int and type(by) is int and type(cx) is int and type(cy) is int:
        v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)
        return (v > 0) - (v < 0)
    # float filter; exact fallback near zero
    fax, fay, fbx, fby, fcx, fcy = float(ax), float(ay), float(bx), float(by), float(cx), float(cy)
    v = (fbx - fax) * (fcy - fay) - (fby - fay) * (fcx - fax)
    m = max(abs(fax), abs(fay), abs(fbx), abs(fby), abs(fcx), abs(fcy), 1.0)
    if abs(v) > 1e-12 * m * m:
        return 1 if v > 0 else -1
    v = cross(a, b, c)
    return (v > 0) - (v < 0)


def vcross(u: Point, v: Point):
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point):
    return u[0] * v[0] + u[1] * v[1]


def sub(a: Point, b: Point) -> Point:
    return (a[0] - b[0], a[1] - b[1])


def dist(a: Point, b: Point) -> float:
    return math.hypot(float(a[0]) - float(b[0]), float(a[1]) - float(b[1]))


def as_fraction(p: Point) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def on_segment(p: Point, a: Point, b: Point) -> bool:
    """Closed segment membership."""
    if orient(a, b, p) != 0:
        return False
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def segments_cross_properly(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Interiors meet in a single point that is interior to both segments."""
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def line_intersection(a: Point, b: Point, c: Point, d: Point):
    """Intersection of lines ab and cd, or None if parallel. Exact."""
    r = sub(b, a)
    s = sub(d, c)
    den = vcross(r, s)
    if den == 0:
        return None
    t = Fraction(vcross(sub(c, a), s)) / den
    return (a[0] + t * r[0], a[1] + t * r[1])


def segment_param(a: Point, b: Point, p: Point) -> Fraction:
    """Parameter of p along ab (p assumed on the line)."""
    if a[0] != b[0]:
        return Fraction(p[0] - a[0]) / (b[0] - a[0])
    return Fraction(p[1] - a[1]) / (b[1] - a[1])


def foot_of_perpendicular(p: Point, a: Point, b: Point) -> Point:
    """Orthogonal projection of p on the line ab. Exact."""
    d = sub(b, a)
    t = Fraction(dot(sub(p, a), d)) / dot(d, d)
    return (a[0] + t * d[0], a[1] + t * d[1])


# --------------------------------------------------------------------- rings

def ring_area2(ring: Sequence[Point]):
    """Twice the signed area (positive for counterclockwise)."""
    s = 0
    n = len(ring)
    for i in range(n):
        x0, y0 = ring[i]
        x1, y1 = ring[(i + 1) % n]
        s += x0 * y1 - x1 * y0
    return s


def ring_edges(ring: Sequence[Point]):
    n = len(ring)
    return [(ring[i], ring[(i + 1) % n]) for i in range(n)]


def is_simple_ring(ring: Sequence[Point]) -> bool:
    n = len(ring)
    if n < 3 or len(set(map(tuple, ring))) != n:
        return False
    if ring_area2(ring) == 0:
        return False
    edges = ring_edges(ring)
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            if j == i + 1:
                # neighbours share b == c; they may not fold back onto each other
                if orient(a, b, d) == 0 and dot(sub(a, b), sub(d, b)) > 0:
                    return False
                continue
            if i == 0 and j == n - 1:
                if orient(c, d, b) == 0 and dot(sub(c, a), sub(b, a)) > 0:
                    return False
                continue
            if segments_intersect(a, b, c, d):
                return False
    return True


def point_in_ring(p: Point, ring: Sequence[Point]) -> int:
    """+1 inside, 0 on boundary, -1 outside (exact crossing number)."""
    inside = False
    n = len(ring)
    for i in range(n):
        a = ring[i]
        b = ring[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            # x coordinate of the crossing, compared without division
            lhs = (p[0] - a[0]) * (b[1] - a[1])
            rhs = (b[0] - a[0]) * (p[1] - a[1])
            if (b[1] - a[1]) > 0:
                if lhs < rhs:
                    inside = not inside
            elif lhs > rhs:
                inside = not inside
    return 1 if inside else -1


def polygon_area(obj) -> Fraction:
    """Exact area of a simple ring or of a domain (outer minus holes)."""
    if isinstance(obj, PolygonalDomain):
        return obj.area
    ring = list(obj)
    if not is_simple_ring(ring):
        raise GeometryError("ring is not simple")
    return abs(Fraction(ring_area2(ring))) / 2


# -------------------------------------------------------------------- domain

@dataclass(frozen=True)
class Edge:
    a: Point
    b: Point
    ring: int  # 0 = outer
    index: int  # global edge id


@dataclass
class PolygonalDomain:
    """Polygon with holes. Outer ring counterclockwise, holes clockwise, so the
    domain interior always lies to the left of every directed edge."""

    outer: list
    holes: list = field(default_factory=list)

    def __post_init__(self):
        self.outer = [_as_point(p) for p in self.outer]
        self.holes = [[_as_point(p) for p in h] for h in self.holes]
        self._validate()
        if ring_area2(self.outer) < 0:
            self.outer.reverse()
        for h in self.holes:
            if ring_area2(h) > 0:
                h.reverse()
        self._build()

    def _validate(self):
        rings = [self.outer] + self.holes
        for k, r in enumerate(rings):
            for x, y in r:
                if not (_is_integral(x) and _is_integral(y)):
                    raise GeometryError("vertex coordinates must be integers")
            if not is_simple_ring(r):
                raise GeometryError("ring %d is not simple" % k)
        for k, h in enumerate(self.holes):
            for v in h:
                if point_in_ring(v, self.outer) != 1:
                    raise GeometryError("hole %d not interior to the outer ring" % k)
            for a, b in ring_edges(h):
                for c, d in ring_edges(self.outer):
                    if segments_intersect(a, b, c, d):
                        raise GeometryError("hole %d not interior to the outer ring" % k)
        for i in range(len(self.holes)):
            for j in range(i + 1, len(self.holes)):
                hi, hj = self.holes[i], self.holes[j]
                for a, b in ring_edges(hi):
                    for c, d in ring_edges(hj):
                        if segments_intersect(a, b, c, d):
                            raise GeometryError("holes %d and %d touch or overlap" % (i, j))
                if point_in_ring(hi[0], hj) == 1 or point_in_ring(hj[0], hi) == 1:
                    raise GeometryError("holes %d and %d are nested" % (i, j))

    def _build(self):
        self.rings = [self.outer] + self.holes
        self.vertices = []
        self.prev_of = {}
        self.next_of = {}
        self.ring_of = {}
        self.edges = []
        for k, r in enumerate(self.rings):
            m = len(r)
            for i, v in enumerate(r):
                self.vertices.append(v)
                self.prev_of[v] = r[i - 1]
                self.next_of[v] = r[(i + 1) % m]
                self.ring_of[v] = k
                self.edges.append(Edge(v, r[(i + 1) % m], k, len(self.edges)))
        self.vertex_set = frozenset(self.vertices)
        xs = [abs(v[0]) for v in self.vertices]
        ys = [abs(v[1]) for v in self.vertices]
        self.L = max(xs + ys)
        self.area = (Fraction(ring_area2(self.outer)) - sum(-Fraction(ring_area2(h)) for h in self.holes)) / 2
        bx = [v[0] for v in self.vertices]
        by = [v[1] for v in self.vertices]
        self.bbox = (min(bx), min(by), max(bx), max(by))

    @property
    def n(self) -> int:
        return len(self.vertices)

    def in_cone(self, v: Point, d: Point) -> bool:
        """Direction d points into the closed domain at vertex v."""
        e1 = sub(self.next_of[v], v)
        e2 = sub(self.prev_of[v], v)
        c = vcross(e1, e2)
        if c > 0:
            return vcross(e1, d) >= 0 and vcross(d, e2) >= 0
        if c < 0:
            return not (vcross(e2, d) > 0 and vcross(d, e1) > 0)
        return vcross(e1, d) >= 0

    def in_cone_strict(self, v: Point, d: Point) -> bool:
        """Direction d points into the open interior at v."""
        e1 = sub(self.next_of[v], v)
        e2 = sub(self.prev_of[v], v)
        c = vcross(e1, e2)
        if c > 0:
            return vcross(e1, d) > 0 and vcross(d, e2) > 0
        if c < 0:
            return not (vcross(e2, d) >= 0 and vcross(d, e1) >= 0)
        return vcross(e1, d) > 0

    def segment_inside(self, a: Point, b: Point) -> bool:
        """Closed segment ab lies in the closed domain (a assumed inside)."""
        if a == b:
            return True
        for e in self.edges:
            c, d = e.a, e.b
            if segments_cross_properly(a, b, c, d):
                return False
        for v in self.vertices:
            if v == a:
                if not self.in_cone(v, sub(b, a)):
                    return False
            elif v == b:
                if not self.in_cone(v, sub(a, b)):
                    return False
            elif on_segment(v, a, b):
                if not (self.in_cone(v, sub(a, v)) and self.in_cone(v, sub(b, v))):
                    return False
        for p, q in ((a, b), (b, a)):
            if p in self.vertex_set:
                continue
            for e in self.edges:
                if on_segment(p, e.a, e.b) and orient(e.a, e.b, q) < 0:
                    return False
        return True

    def contains(self, p: Point) -> bool:
        return locate_point(self, p) != EXTERIOR


def _is_integral(x) -> bool:
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        return x.denominator == 1
    if isinstance(x, float):
        return x.is_integer()
    return False


def _as_point(p) -> Point:
    x, y = p
    if isinstance(x, float) and x.is_integer():
        x = int(x)
    if isinstance(y, float) and y.is_integer():
        y = int(y)
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    if isinstance(y, Fraction) and y.denominator == 1:
        y = int(y)
    return (x, y)


def locate_point(domain: PolygonalDomain, p: Point) -> str:
    for e in domain.edges:
        if on_segment(p, e.a, e.b):
            return BOUNDARY
    if point_in_ring(p, domain.outer) != 1:
        return EXTERIOR
    for h in domain.holes:
        if point_in_ring(p, h) == 1:
            return EXTERIOR
    return INTERIOR


# ------------------------------------------------------------- triangulation

@dataclass
class Triangulation:
    points: list
    triangles: list  # vertex index triples, counterclockwise
    adjacency: list = field(default_factory=list)  # per triangle: {edge(i,j): neighbour}

    def area(self) -> Fraction:
        return sum(abs(Fraction(ring_area2([self.points[i] for i in t]))) for t in self.triangles) / 2

    def triangle(self, k: int):
        return [self.points[i] for i in self.triangles[k]]

    def find(self, p: Point) -> int:
        """Index of a triangle containing p (closed), or -1."""
        for k, t in enumerate(self.triangles):
            a, b, c = (self.points[i] for i in t)
            if orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0:
                return k
        return -1


def _bridge_holes(domain: PolygonalDomain) -> list:
    ring = list(domain.outer)
    bridges = []
    holes = sorted(domain.holes, key=lambda h: max(v[0] for v in h), reverse=True)
    for h in holes:
        mi = max(range(len(h)), key=lambda i: (h[i][0], h[i][1]))
        m = h[mi]
        cands = sorted(set(ring), key=lambda v: ((v[0] - m[0]) ** 2 + (v[1] - m[1]) ** 2, v))
        chosen = None
        for v in cands:
            if not domain.segment_inside(m, v):
                continue
            if any(segments_cross_properly(m, v, a, b) for a, b in bridges):
                continue
            if any(on_segment(x, m, v) and x != v for x, _ in bridges):
                continue
            chosen = v
            break
        if chosen is None:
            raise GeometryError("could not bridge hole")
        # splice at the occurrence of chosen whose wedge contains direction m - chosen
        idx = None
        for i, v in enumerate(ring):
            if v != chosen:
                continue
            u, w = ring[i - 1], ring[(i + 1) % len(ring)]
            d = sub(m, v)
            if _in_wedge(sub(w, v), sub(u, v), d):
                idx = i
                break
        if idx is None:
            idx = ring.index(chosen)
        hole_seq = h[mi:] + h[:mi] + [m]
        ring = ring[: idx + 1] + hole_seq + ring[idx:]
        bridges.append((m, chosen))
    return ring


def _in_wedge(e1, e2, d) -> bool:
    c = vcross(e1, e2)
    if c > 0:
        return vcross(e1, d) >= 0 and vcross(d, e2) >= 0
    if c < 0:
        return not (vcross(e2, d) > 0 and vcross(d, e1) > 0)
    return vcross(e1, d) >= 0


def _ear_clip(ring: list) -> list:
    """Triangulate a weakly simple CCW ring (possibly with bridge duplicates)."""
    verts = list(ring)
    tris = []
    guard = 0
    while len(verts) > 3:
        guard += 1
        if guard > 10 * len(ring) ** 2 + 100:
            raise GeometryError("ear clipping failed")
        m = len(verts)
        clipped = False
        for i in range(m):
            a, b, c = verts[i - 1], verts[i], verts[(i + 1) % m]
            o = orient(a, b, c)
            if o == 0:
                if on_segment(b, a, c) and a != c:
                    del verts[i]
                    clipped = True
                    break
                continue
            if o < 0:
                continue
            ok = True
            for j in range(m):
                p = verts[j]
                if p == a or p == b or p == c:
                    continue
                if orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0:
                    ok = False
                    break
            if ok:
                for j in range(m):
                    p, q = verts[j], verts[(j + 1) % m]
                    if segments_cross_properly(a, c, p, q):
                        ok = False
                        break
            if ok:
                tris.append((a, b, c))
                del verts[i]
                clipped = True
                break
        if not clipped:
            raise GeometryError("ear clipping found no ear")
    if len(verts) == 3 and orient(*verts) > 0:
        tris.append(tuple(verts))
    return tris


def triangulate(domain: PolygonalDomain) -> Triangulation:
    ring = _bridge_holes(domain) if domain.holes else list(domain.outer)
    tris = _ear_clip(ring)
    index = {}
    points = []
    out = []
    for t in tris:
        ids = []
        for p in t:
            if p not in index:
                index[p] = len(points)
                points.append(p)
            ids.append(index[p])
        out.append(tuple(ids))
    tri = Triangulation(points, out)
    edge_owner = {}
    tri.adjacency = [dict() for _ in out]
    for k, t in enumerate(out):
        for i in range(3):
            e = frozenset((t[i], t[(i + 1) % 3]))
            if e in edge_owner:
                j = edge_owner[e]
                tri.adjacency[k][e] = j
                tri.adjacency[j][e] = k
            else:
                edge_owner[e] = k
    return tri


def bbox_of(points: Iterable[Point]):
    pts = list(points)
    return (min(p[0] for p in pts), min(p[1] for p in pts), max(p[0] for p in pts), max(p[1] for p in pts))
