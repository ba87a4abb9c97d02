"""Minimum-exposure path solvers.

* 0/1 exposure in a simple polygon: the Euclidean shortest path (funnel over
  the triangulation sleeve).
* 0/1 exposure with a few holes: enumerate homotopy classes by their fence
  crossing words, take the locally shortest path of each and keep the one
  with the least weakly visible area.
* Integral exposure: weighted-region reduction plus a Steiner-graph search.
"""
from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import GeometryError, Point, PolygonalDomain, _as_point, orient, sub, triangulate
from .subdivision import _extend, decomposition_chords
from .visibility import path_sample_points, polygon_area_float, sees, visibility_graph, visibility_polygon_fast, weak_visibility_area
from .weights import build_weighted_subdivision
from .wrp import choose_budget, discretize, path_cost, shortest_weighted_path


def path_length(path) -> float:
    return sum(math.dist((float(a[0]), float(a[1])), (float(b[0]), float(b[1]))) for a, b in zip(path, path[1:]))


def _pt(p) -> Point:
    x, y = p
    x = x if isinstance(x, (int, Fraction)) else Fraction(x)
    y = y if isinstance(y, (int, Fraction)) else Fraction(y)
    return (x, y)


# ------------------------------------------------------------- simple polygon

def _sleeve(tri, s, t):
    ts, tt = tri.find(s), tri.find(t)
    prev = {ts: None}
    queue = [ts]
    for k in queue:
        if k == tt:
            break
        for e, j in sorted(tri.adjacency[k].items(), key=lambda kv: kv[1]):
            if j not in prev:
                prev[j] = (k, e)
                queue.append(j)
    if tt not in prev:
        raise GeometryError("s and t are not connected")
    chain = []
    k = tt
    while prev[k] is not None:
        j, e = prev[k]
        chain.append((j, e))
        k = j
    chain.reverse()
    return chain


def _portals(tri, chain, s, t):
    portals = [(s, s)]
    for k, e in chain:
        a, b, c = tri.triangles[k]
        cyc = [a, b, c]
        for i in range(3):
            p, q = cyc[i], cyc[(i + 1) % 3]
            if frozenset((p, q)) == e:
                break
        P, Q = tri.points[p], tri.points[q]
        if orient(*(tri.points[x] for x in cyc)) < 0:
            P, Q = Q, P
        portals.append((Q, P))  # (left, right) when leaving through p->q
    portals.append((t, t))
    return portals


def _funnel(portals):
    apex, left, right = portals[0][0], portals[0][0], portals[0][1]
    ai = li = ri = 0
    path = [apex]
    i = 1
    while i < len(portals):
        pl, pr = portals[i]
        if orient(apex, right, pr) >= 0:
            if apex == right or orient(apex, left, pr) < 0:
                right, ri = pr, i
            else:
                path.append(left)
                apex, ai = left, li
                left = right = apex
                li = ri = ai
                i = ai + 1
                continue
        if orient(apex, left, pl) <= 0:
            if apex == left or orient(apex, right, pl) > 0:
                left, li = pl, i
            else:
                path.append(right)
                apex, ai = right, ri
                left = right = apex
                li = ri = ai
                i = ai + 1
                continue
        i += 1
    if path[-1] != portals[-1][0]:
        path.append(portals[-1][0])
    out = [path[0]]
    for q in path[1:]:
        if q != out[-1]:
            out.append(q)
    return out


def shortest_path_simple(domain: PolygonalDomain, s: Point, t: Point) -> list:
    """Euclidean shortest s-t path in a polygon without holes."""
    if domain.holes:
        raise GeometryError("shortest_path_simple needs a polygon without holes")
    s, t = _pt(s), _pt(t)
    if not domain.contains(s) or not domain.contains(t):
        raise GeometryError("s and t must lie in the domain")
    if s == t:
        return [s]
    if sees(domain, s, t):
        return [s, t]
    tri = triangulate(domain)
    return _funnel(_portals(tri, _sleeve(tri, s, t), s, t))


@dataclass(frozen=True)
class EssentialCut:
    chord: tuple
    vertex: Point
    s_side: int  # orientation sign of s with respect to the chord


def essential_cut(domain: PolygonalDomain, p: Point, s: Point):
    """The chord of V(p) separating p from s, or None when p sees s."""
    p, s = _pt(p), _pt(s)
    if sees(domain, p, s):
        return None
    path = shortest_path_simple(domain, p, s)
    v = path[1]
    w, _ = _extend(domain, v, sub(v, p))
    return EssentialCut((v, w), v, orient(v, w, s))


# --------------------------------------------------------------- few holes

@dataclass(frozen=True)
class Fence:
    hole: int
    top: Point  # hole vertex
    bottom: Point  # first boundary point straight below


def fences(domain: PolygonalDomain) -> list:
    """One vertical fence per hole, from its lowest-leftmost vertex down."""
    out = []
    for k, h in enumerate(domain.holes):
        v = min(h, key=lambda q: (q[1], q[0]))
        w, _ = _extend(domain, v, (0, -1))
        out.append(Fence(k, v, w))
    return out


def _crossings(fs, a, b) -> list:
    """Signed fence crossings of segment ab in order along it."""
    hits = []
    for f in fs:
        x = f.top[0]
        la, lb = a[0] < x, b[0] < x
        if la == lb:
            continue
        tpar = Fraction(x - a[0]) / (b[0] - a[0])
        y = a[1] + tpar * (b[1] - a[1])
        if f.bottom[1] <= y <= f.top[1]:
            hits.append((tpar, (f.hole, 1 if la else -1)))
    hits.sort()
    return [h for _, h in hits]


def _reduce(word):
    out = []
    for c in word:
        if out and out[-1][0] == c[0] and out[-1][1] == -c[1]:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


@dataclass(frozen=True)
class HomotopySignature:
    word: tuple

    def __post_init__(self):
        if _reduce(self.word) != tuple(self.word):
            raise ValueError("signature word is not reduced")


def signature_of(domain: PolygonalDomain, path) -> HomotopySignature:
    fs = fences(domain)
    word = []
    for a, b in zip(path, path[1:]):
        word.extend(_crossings(fs, a, b))
    return HomotopySignature(_reduce(word))


def enumerate_signatures(h: int, max_crossings: int):
    """All reduced words with at most max_crossings letters per fence."""
    letters = [(k, sg) for k in range(h) for sg in (1, -1)]
    seen = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for c in letters:
                if w and w[-1] == (c[0], -c[1]):
                    continue
                if sum(1 for x in w if x[0] == c[0]) >= max_crossings:
                    continue
                nw = w + (c,)
                nxt.append(nw)
        seen.extend(nxt)
        frontier = nxt
    return [HomotopySignature(w) for w in seen]


class _LiftedGraph:
    def __init__(self, domain: PolygonalDomain, s, t):
        self.nodes = [s, t] + [v for v in domain.vertices if v != s and v != t]
        vg = visibility_graph(domain)
        fs = fences(domain)
        idx = {p: i for i, p in enumerate(self.nodes)}
        adj = {i: [] for i in range(len(self.nodes))}
        pairs = [(idx[a], idx[b]) for a, b in (tuple(e) for e in vg.edges)]
        for q in (s, t):
            for v in domain.vertices:
                if v != q and sees(domain, q, v):
                    pairs.append((idx[q], idx[v]))
        if s != t and sees(domain, s, t):
            pairs.append((0, 1))
        for i, j in set(pairs):
            a, b = self.nodes[i], self.nodes[j]
            ln = math.dist((float(a[0]), float(a[1])), (float(b[0]), float(b[1])))
            c = tuple(_crossings(fs, a, b))
            adj[i].append((j, ln, c))
            adj[j].append((i, ln, tuple((h, -sg) for h, sg in reversed(c))))
        for i in adj:
            adj[i].sort()
        self.adj = adj

    def shortest(self, word):
        """Shortest s-t path whose crossing sequence spells ``word``."""
        m = len(word)
        goal = (1, m)
        dist = {(0, 0): 0.0}
        prev = {}
        heap = [(0.0, 0, 0)]
        while heap:
            d, u, k = heapq.heappop(heap)
            if d > dist.get((u, k), math.inf):
                continue
            if (u, k) == goal:
                break
            for v, ln, cr in self.adj[u]:
                r = len(cr)
                if k + r > m or tuple(word[k:k + r]) != cr:
                    continue
                st = (v, k + r)
                nd = d + ln
                if nd < dist.get(st, math.inf) - 1e-12:
                    dist[st] = nd
                    prev[st] = (u, k)
                    heapq.heappush(heap, (nd, v, k + r))
        if goal not in dist:
            return None, math.inf
        seq = [goal]
        while seq[-1] != (0, 0):
            seq.append(prev[seq[-1]])
        seq.reverse()
        return [self.nodes[u] for u, _ in seq], dist[goal]


@dataclass
class HolesResult:
    path: list
    area: float
    signature: HomotopySignature
    candidates: list = field(default_factory=list)  # (signature, length, area)


def secluded_path_holes(domain: PolygonalDomain, s: Point, t: Point, max_crossings: int = 2, refinement: int = 4) -> HolesResult:
    """Least weakly visible path over homotopy classes with bounded crossings."""
    if max_crossings < 1:
        raise ValueError("max_crossings must be at least 1")
    s, t = _pt(s), _pt(t)
    if not domain.holes:
        path = shortest_path_simple(domain, s, t)
        sig = HomotopySignature(())
        area = weak_visibility_area(domain, path, refinement)
        return HolesResult(path, area, sig, [(sig, path_length(path), area)])
    g = _LiftedGraph(domain, s, t)
    seen = {}
    for sig in enumerate_signatures(len(domain.holes), max_crossings):
        path, ln = g.shortest(sig.word)
        if path is None:
            continue
        key = tuple(path)
        if key in seen:
            continue
        seen[key] = (sig, ln)
    cands = []
    for key, (sig, ln) in seen.items():
        area = weak_visibility_area(domain, list(key), refinement)
        cands.append((area, ln, sig.word, list(key), sig))
    cands.sort(key=lambda c: (round(c[0], 9), c[1], c[2]))
    best = cands[0]
    return HolesResult(best[3], best[0], best[4], [(c[4], c[1], c[0]) for c in cands])


# ---------------------------------------------------------- integral exposure

_GAUSS = np.polynomial.legendre.leggauss(5)


def _breakpoints(domain, a, b):
    from .geometry import line_intersection, segments_intersect
    from .visibility import _param

    ts = {Fraction(0), Fraction(1)}
    for c, d in decomposition_chords(domain):
        if segments_intersect(a, b, c, d):
            q = line_intersection(a, b, c, d)
            if q is not None:
                ts.add(_param(a, b, q))
    return sorted(float(x) for x in ts)


def integral_exposure(domain: PolygonalDomain, path, samples_per_unit: float = 8.0) -> float:
    """Integral of |V(p)| along the path (piecewise Gauss-Legendre quadrature,
    with breakpoints wherever the path crosses a decomposition chord)."""
    total = 0.0
    xs, ws = _GAUSS
    pts = [_pt(p) for p in path]
    for a, b in zip(pts, pts[1:]):
        if a == b:
            continue
        ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
        L = math.hypot(bx - ax, by - ay)
        ts = _breakpoints(domain, a, b)
        for t0, t1 in zip(ts, ts[1:]):
            if t1 <= t0:
                continue
            k = max(1, math.ceil((t1 - t0) * L * samples_per_unit))
            for j in range(k):
                u0 = t0 + (t1 - t0) * j / k
                u1 = t0 + (t1 - t0) * (j + 1) / k
                half = (u1 - u0) / 2
                for x, w in zip(xs, ws):
                    u = u0 + half * (x + 1)
                    q = (ax + u * (bx - ax), ay + u * (by - ay))
                    total += w * half * L * polygon_area_float(visibility_polygon_fast(domain, q))
    return total


@dataclass
class PtasResult:
    path: list
    cost: float  # true integral exposure of the path
    weighted_cost: float  # integral of the piecewise-constant weight
    stats: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.path, self.cost))


def integral_secluded_ptas(domain: PolygonalDomain, s: Point, t: Point, eps: float, arc_budget: float = 4e6,
                           samples_per_unit: float = 8.0) -> PtasResult:
    """Approximate minimum integral exposure s-t path."""
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    s, t = _pt(s), _pt(t)
    ws = build_weighted_subdivision(domain, eps)
    budget = choose_budget(ws, eps, arc_budget)
    g = discretize(ws, s, t, eps, budget)
    res = shortest_weighted_path(g)
    stats = dict(res.stats)
    stats["steiner_budget"] = budget
    return PtasResult(res.path, integral_exposure(domain, res.path, samples_per_unit), res.cost, stats)
