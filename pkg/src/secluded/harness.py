"""Randomized checks shared by the CLI ``verify`` commands and the test suite."""
from __future__ import annotations

import random
from fractions import Fraction

from .geometry import PolygonalDomain, is_simple_ring, segments_cross_properly, triangulate
from .solvers import shortest_path_simple
from .subdivision import locate
from .visibility import visible_area, weak_visibility_area
from .weights import build_weighted_subdivision, cell_constant_and_signs, refine_decomposition


# ------------------------------------------------------------------ sampling

def random_simple_polygon(rng: random.Random, n: int, size: int = 64, tries: int = 200) -> PolygonalDomain:
    """Simple polygon on n distinct integer points, untangled by 2-opt moves."""
    for _ in range(tries):
        pts = set()
        while len(pts) < n:
            pts.add((rng.randint(0, size), rng.randint(0, size)))
        ring = list(pts)
        rng.shuffle(ring)
        if _untangle(ring) and is_simple_ring(ring):
            return PolygonalDomain(ring)
    raise RuntimeError("could not draw a simple polygon")


def _untangle(ring, limit=20000) -> bool:
    m = len(ring)
    for _ in range(limit):
        hit = None
        for i in range(m):
            a, b = ring[i], ring[(i + 1) % m]
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue
                c, d = ring[j], ring[(j + 1) % m]
                if segments_cross_properly(a, b, c, d):
                    hit = (i, j)
                    break
            if hit:
                break
        if hit is None:
            return True
        i, j = hit
        ring[i + 1 : j + 1] = reversed(ring[i + 1 : j + 1])
    return False


def random_point(domain: PolygonalDomain, rng: random.Random, den: int = 97):
    """Interior point with rational coordinates, area-weighted over a triangulation."""
    tri = triangulate(domain)
    areas = [abs(float(_tri_area(tri.triangle(k)))) for k in range(len(tri.triangles))]
    while True:
        a, b, c = tri.triangle(rng.choices(range(len(areas)), weights=areas)[0])
        u, v = rng.randint(1, den - 2), rng.randint(1, den - 2)
        if u + v >= den:
            u, v = den - u, den - v
        if u + v >= den:
            continue
        fu, fv = Fraction(u, den), Fraction(v, den)
        p = (a[0] + fu * (b[0] - a[0]) + fv * (c[0] - a[0]), a[1] + fu * (b[1] - a[1]) + fv * (c[1] - a[1]))
        if domain.contains(p):
            return p


def _tri_area(t):
    a, b, c = t
    return Fraction((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]), 2)


def alternative_paths(domain: PolygonalDomain, s, t, rng: random.Random, count: int = 50):
    """s-t paths bent through one or two random interior waypoints."""
    out = []
    while len(out) < count:
        way = [random_point(domain, rng) for _ in range(rng.choice((1, 1, 2)))]
        path = [s]
        for a, b in zip([s] + way, way + [t]):
            path.extend(shortest_path_simple(domain, a, b)[1:])
        out.append(path)
    return out


# -------------------------------------------------------------------- checks

def check_identity(domain: PolygonalDomain, points) -> dict:
    """Visible area against constant-plus-signed-triangle decomposition."""
    refined = refine_decomposition(domain)
    cache = {}
    worst = 0.0
    for p in points:
        cid = locate(refined, p)
        if cid not in cache:
            cache[cid] = cell_constant_and_signs(domain, refined.face_polygon(cid))
        exact = float(visible_area(domain, p))
        rel = abs(cache[cid].area_at(p) - exact) / exact
        worst = max(worst, rel)
    return {"points": len(points), "max_rel_error": worst}


def check_sandwich(domain: PolygonalDomain, eps: float, points) -> dict:
    ws = build_weighted_subdivision(domain, eps)
    bad = []
    lo_r, hi_r = float("inf"), 0.0
    for p in points:
        area = float(visible_area(domain, p))
        w = ws.weights[locate(ws.sub, p)]
        r = w / area
        lo_r, hi_r = min(lo_r, r), max(hi_r, r)
        if not (1 - 2 * eps) * area - 1e-9 * area <= w <= (1 + 2 * eps) * area + 1e-9 * area:
            bad.append([float(p[0]), float(p[1]), w, area])
    return {"eps": eps, "faces": ws.face_count(), "points": len(points), "violations": bad,
            "min_ratio": lo_r, "max_ratio": hi_r}


def check_shortest_is_secluded(domain: PolygonalDomain, s, t, rng: random.Random, count: int = 50,
                               refinement: int = 4, slack: float = 0.01) -> dict:
    sp = shortest_path_simple(domain, s, t)
    base = weak_visibility_area(domain, sp, refinement)
    worse = []
    for path in alternative_paths(domain, s, t, rng, count):
        a = weak_visibility_area(domain, path, refinement)
        if base > a * (1 + slack):
            worse.append({"path": [[float(x), float(y)] for x, y in path], "area": a})
    return {"shortest_area": base, "alternatives": count, "violations": worse}
