"""Planar arrangements inside a domain and the visibility decomposition."""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .geometry import (
    GeometryError,
    Point,
    PolygonalDomain,
    dot,
    line_intersection,
    on_segment,
    orient,
    point_in_ring,
    ring_area2,
    sub,
    vcross,
)
from .visibility import VisibilityGraph, _angle_cmp, _cache, visibility_graph


@dataclass(frozen=True)
class Chord:
    a: Point
    b: Point
    through: tuple = ()  # domain vertices the chord passes through

    def as_segment(self):
        return (self.a, self.b)


@dataclass
class Subdivision:
    vertices: list
    edges: list  # (i, j) vertex index pairs
    faces: list  # counterclockwise vertex index cycles
    edge_faces: dict = field(default_factory=dict)  # frozenset(i, j) -> [face ids]
    payload: list = field(default_factory=list)

    def face_polygon(self, f: int) -> list:
        return [self.vertices[i] for i in self.faces[f]]

    def face_area(self, f: int) -> Fraction:
        return Fraction(ring_area2(self.face_polygon(f))) / 2

    def total_area(self) -> Fraction:
        return sum((self.face_area(f) for f in range(len(self.faces))), Fraction(0))

    def neighbours(self, f: int) -> set:
        out = set()
        ring = self.faces[f]
        for k in range(len(ring)):
            e = frozenset((ring[k], ring[(k + 1) % len(ring)]))
            for g in self.edge_faces.get(e, ()):
                if g != f:
                    out.add(g)
        return out

    def representative(self, f: int) -> Point:
        return interior_point(self.face_polygon(f))

    def _bboxes(self):
        if not hasattr(self, "_bb"):
            bb = []
            for f in range(len(self.faces)):
                poly = self.face_polygon(f)
                xs = [float(p[0]) for p in poly]
                ys = [float(p[1]) for p in poly]
                bb.append((min(xs) - 1e-9, min(ys) - 1e-9, max(xs) + 1e-9, max(ys) + 1e-9))
            self._bb = bb
        return self._bb


def interior_point(ring) -> Point:
    """A point strictly inside a simple CCW ring (exact)."""
    n = len(ring)
    if is_convex(ring):
        return (sum(Fraction(p[0]) for p in ring) / n, sum(Fraction(p[1]) for p in ring) / n)
    for i in range(n):
        a, b, c = ring[i - 1], ring[i], ring[(i + 1) % n]
        if orient(a, b, c) <= 0:
            continue
        inside = [p for p in ring if p not in (a, b, c) and orient(a, b, p) >= 0 and orient(b, c, p) >= 0 and orient(c, a, p) >= 0]
        if not inside:
            return ((Fraction(a[0]) + b[0] + c[0]) / 3, (Fraction(a[1]) + b[1] + c[1]) / 3)
        # pull towards b past the closest intruding vertex
        q = min(inside, key=lambda p: abs(Fraction(vcross(sub(c, a), sub(p, a)))))
        return ((Fraction(b[0]) + q[0]) / 2, (Fraction(b[1]) + q[1]) / 2)
    raise GeometryError("degenerate face")


def is_convex(ring) -> bool:
    n = len(ring)
    return all(orient(ring[i - 1], ring[i], ring[(i + 1) % n]) >= 0 for i in range(n))


# ------------------------------------------------------------------- chords

def _extend(domain: PolygonalDomain, start: Point, d: Point):
    """Walk from vertex ``start`` along d while inside the open domain."""
    cur = start
    passed = []
    while True:
        if cur in domain.vertex_set:
            if not domain.in_cone_strict(cur, d):
                return cur, passed
        best = None
        for e in domain.edges:
            s = sub(e.b, e.a)
            den = vcross(d, s)
            if den == 0:
                continue
            ap = sub(e.a, cur)
            t = Fraction(vcross(ap, s)) / den
            if t <= 0:
                continue
            u = Fraction(vcross(ap, d)) / den
            if 0 <= u <= 1 and (best is None or t < best):
                best = t
        for v in domain.vertices:
            w = sub(v, cur)
            if vcross(d, w) == 0 and dot(d, w) > 0:
                t = Fraction(dot(w, d)) / dot(d, d)
                if best is None or t < best:
                    best = t
        if best is None:
            raise GeometryError("ray escaped the domain")
        nxt = (cur[0] + best * d[0], cur[1] + best * d[1])
        nxt = _clean(nxt)
        if nxt in domain.vertex_set:
            passed.append(nxt)
            cur = nxt
            continue
        return nxt, passed


def _clean(p):
    x, y = p
    if isinstance(x, Fraction) and x.denominator == 1:
        x = int(x)
    if isinstance(y, Fraction) and y.denominator == 1:
        y = int(y)
    return (x, y)


def extend_visibility_edges(domain: PolygonalDomain, vg: VisibilityGraph | None = None) -> list:
    """One maximal chord per visibility edge, deduplicated."""
    vg = vg or visibility_graph(domain)
    seen = {}
    for e in sorted(vg.edges, key=lambda e: sorted(e)):
        u, v = sorted(e)
        fwd, pf = _extend(domain, v, sub(v, u))
        bwd, pb = _extend(domain, u, sub(u, v))
        key = frozenset((fwd, bwd))
        if key in seen:
            continue
        through = tuple(sorted(set(pb[:-1] if pb and pb[-1] == bwd else pb) | {u, v} | set(p for p in pf if p != fwd)))
        a, b = sorted((bwd, fwd))
        seen[key] = Chord(a, b, through)
    return list(seen.values())


def decomposition_chords(domain: PolygonalDomain) -> list:
    c = _cache(domain)
    if "chords" not in c:
        c["chords"] = [ch.as_segment() for ch in extend_visibility_edges(domain)]
    return c["chords"]


# -------------------------------------------------------------- arrangement

def _line_key(a, b):
    """Canonical (A, B, C) with A x + B y = C for the line through a, b."""
    A = Fraction(b[1] - a[1])
    B = Fraction(a[0] - b[0])
    C = A * a[0] + B * a[1]
    den = 1
    for v in (A, B, C):
        den = den * v.denominator // gcd(den, v.denominator)
    A, B, C = int(A * den), int(B * den), int(C * den)
    g = gcd(gcd(abs(A), abs(B)), abs(C)) or 1
    A, B, C = A // g, B // g, C // g
    if A < 0 or (A == 0 and B < 0):
        A, B, C = -A, -B, -C
    return (A, B, C)


def _merge_collinear(segments):
    groups = {}
    for a, b in segments:
        if a == b:
            continue
        groups.setdefault(_line_key(a, b), []).append((a, b))
    out = []
    for key, segs in groups.items():
        A, B, _ = key
        direction = (B, -A)
        items = []
        for a, b in segs:
            ta, tb = dot(a, direction), dot(b, direction)
            if ta > tb:
                a, b, ta, tb = b, a, tb, ta
            items.append((ta, tb, a, b))
        items.sort(key=lambda x: (x[0], x[1]))
        cur = None
        for ta, tb, a, b in items:
            if cur is None:
                cur = [ta, tb, a, b]
            elif ta <= cur[1]:
                if tb > cur[1]:
                    cur[1], cur[3] = tb, b
            else:
                out.append((cur[2], cur[3]))
                cur = [ta, tb, a, b]
        out.append((cur[2], cur[3]))
    return out


def build_arrangement(domain: PolygonalDomain, segments) -> Subdivision:
    """Exact arrangement of the domain boundary plus the given segments,
    restricted to faces inside the domain."""
    segs = [tuple(map(_clean, s.as_segment() if isinstance(s, Chord) else s)) for s in segments]
    segs += [(e.a, e.b) for e in domain.edges]
    segs = _merge_collinear(segs)
    m = len(segs)
    fs = [(float(a[0]), float(a[1]), float(b[0]), float(b[1])) for a, b in segs]
    fb = [(min(x0, x1) - 1e-9, min(y0, y1) - 1e-9, max(x0, x1) + 1e-9, max(y0, y1) + 1e-9) for x0, y0, x1, y1 in fs]
    scale = max(1.0, float(domain.L))
    tol = 1e-10 * scale * scale

    def sgn(i, j, k, which):
        # orientation of an endpoint of segment k against segment i, float first
        x0, y0, x1, y1 = fs[i]
        px, py = (fs[k][0], fs[k][1]) if which == 0 else (fs[k][2], fs[k][3])
        v = (x1 - x0) * (py - y0) - (y1 - y0) * (px - x0)
        if v > tol:
            return 1
        if v < -tol:
            return -1
        return orient(segs[i][0], segs[i][1], segs[k][which])

    pts_on = [{a, b} for a, b in segs]
    order = sorted(range(m), key=lambda i: fb[i][0])
    for ii in range(m):
        i = order[ii]
        a, b = segs[i]
        bi = fb[i]
        for jj in range(ii + 1, m):
            j = order[jj]
            bj = fb[j]
            if bj[0] > bi[2]:
                break
            if bj[1] > bi[3] or bj[3] < bi[1]:
                continue
            c, d = segs[j]
            o1, o2 = sgn(i, None, j, 0), sgn(i, None, j, 1)
            if o1 * o2 > 0:
                continue
            o3, o4 = sgn(j, None, i, 0), sgn(j, None, i, 1)
            if o3 * o4 > 0:
                continue
            if o1 == 0 and o2 == 0:
                # collinear, merged already: only shared endpoints possible
                for q in (c, d):
                    if on_segment(q, a, b):
                        pts_on[i].add(q)
                for q in (a, b):
                    if on_segment(q, c, d):
                        pts_on[j].add(q)
                continue
            if o1 == 0:
                q = c
            elif o2 == 0:
                q = d
            elif o3 == 0:
                q = a
            elif o4 == 0:
                q = b
            else:
                q = _clean(line_intersection(a, b, c, d))
            pts_on[i].add(q)
            pts_on[j].add(q)
    edge_lines = {}
    for e in domain.edges:
        edge_lines.setdefault(_line_key(e.a, e.b), []).append(e)
    vid = {}
    verts = []
    edges = set()
    boundary_dir = {}
    for (a, b), pts in zip(segs, pts_on):
        dvec = sub(b, a)
        ordered = sorted(pts, key=lambda q: dot(sub(q, a), dvec))
        for q in ordered:
            if q not in vid:
                vid[q] = len(verts)
                verts.append(q)
        on_lines = edge_lines.get(_line_key(a, b), ())
        for q0, q1 in zip(ordered, ordered[1:]):
            i, j = vid[q0], vid[q1]
            edges.add((min(i, j), max(i, j)))
            if not on_lines:
                continue
            # boundary tags: directed pieces lying on domain edges
            mid = ((Fraction(q0[0]) + q1[0]) / 2, (Fraction(q0[1]) + q1[1]) / 2)
            for e in on_lines:
                if on_segment(mid, e.a, e.b):
                    fwd = dot(sub(q1, q0), sub(e.b, e.a)) > 0
                    boundary_dir[(i, j)] = fwd
                    boundary_dir[(j, i)] = not fwd
                    break
    edges = sorted(edges)
    out = {k: [] for k in range(len(verts))}
    for i, j in edges:
        out[i].append(j)
        out[j].append(i)
    for v in out:
        pv = verts[v]
        out[v].sort(key=functools.cmp_to_key(lambda a, b, pv=pv: _angle_cmp(sub(verts[a], pv), sub(verts[b], pv))))
    pos = {v: {w: k for k, w in enumerate(out[v])} for v in out}
    visited = set()
    faces = []
    for i, j in edges:
        for u, v in ((i, j), (j, i)):
            if (u, v) in visited:
                continue
            cyc = []
            a, b = u, v
            while (a, b) not in visited:
                visited.add((a, b))
                cyc.append(a)
                nb = out[b]
                k = pos[b][a]
                w = nb[(k - 1) % len(nb)]
                a, b = b, w
            ring = [verts[k] for k in cyc]
            if ring_area2(ring) <= 0:
                continue
            inside = False
            for k in range(len(cyc)):
                he = (cyc[k], cyc[(k + 1) % len(cyc)])
                tag = boundary_dir.get(he)
                if tag is None or tag:
                    inside = True
                    break
            if inside:
                faces.append(cyc)
    faces.sort(key=lambda c: min(verts[k] for k in c))
    faces = [_rotate_min(c) for c in faces]
    edge_faces = {}
    for f, cyc in enumerate(faces):
        for k in range(len(cyc)):
            e = frozenset((cyc[k], cyc[(k + 1) % len(cyc)]))
            edge_faces.setdefault(e, []).append(f)
    sub_ = Subdivision(verts, list(edges), faces, edge_faces, [dict() for _ in faces])
    return sub_


def _rotate_min(cyc):
    k = cyc.index(min(cyc))
    return cyc[k:] + cyc[:k]


def euler_characteristic(sub_: Subdivision) -> int:
    """V - E + F over the bounded interior faces."""
    return len(sub_.vertices) - len(sub_.edges) + len(sub_.faces)


def visibility_decomposition(domain: PolygonalDomain) -> Subdivision:
    c = _cache(domain)
    if "vd" not in c:
        c["vd"] = build_arrangement(domain, extend_visibility_edges(domain))
    return c["vd"]


def locate(sub_: Subdivision, p: Point) -> int:
    """Face containing p; ties on shared edges go to the lowest face id."""
    x, y = float(p[0]), float(p[1])
    for f, (x0, y0, x1, y1) in enumerate(sub_._bboxes()):
        if x < x0 or x > x1 or y < y0 or y > y1:
            continue
        if point_in_ring(p, sub_.face_polygon(f)) >= 0:
            return f
    raise GeometryError("point %r is not inside the subdivision" % (p,))
