"""Weighted-region shortest paths over a convex weighted subdivision.

Steiner points are placed on every subdivision edge, every pair of points on
the boundary of a common face is joined by a straight arc (faces are convex,
so the arc stays inside), and a label-setting search finds the cheapest s-t
route in that graph.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .geometry import GeometryError, Point, line_intersection, orient, point_in_ring, sub, vcross
from .subdivision import _clean, locate
from .weights import WeightedSubdivision


@dataclass
class SteinerGraph:
    points: list  # node id -> exact point
    xy: np.ndarray
    u: np.ndarray
    v: np.ndarray
    cost: np.ndarray
    s: int
    t: int
    stats: dict = field(default_factory=dict)

    @property
    def node_count(self) -> int:
        return len(self.points)

    @property
    def arc_count(self) -> int:
        return len(self.u)


@dataclass
class WeightedPathResult:
    path: list
    cost: float
    stats: dict = field(default_factory=dict)


def _dyadic_chain(eps: float) -> list:
    """eps, 2 eps, 4 eps, ... below 1: halving eps only adds components."""
    out = []
    e = float(eps)
    while e < 1:
        out.append(e)
        e *= 2
    return out or [min(float(eps), 1.0)]


def _thin(ts: list, k: int) -> list:
    if k <= 0:
        return []
    if len(ts) <= k:
        return ts
    step = len(ts) / k
    return [ts[int((i + 0.5) * step)] for i in range(k)]


def edge_parameters(length: float, near_u: float, near_v: float, eps: float, budget: int | None = None) -> list:
    """Sorted interior parameters in (0, 1) of the Steiner points of one edge.

    From each endpoint, points sit at distances d0 (1 + e)^j with
    d0 = e * (shortest other edge at that endpoint), for every e of the
    dyadic chain of eps, each chain member contributing at most ceil(4 / e).
    """
    # integer numerators over a fixed power of two: exact, and identical for
    # every eps of a dyadic chain, so halving eps only adds points
    den = 1 << 20
    ks = {den // 2}
    for e in _dyadic_chain(eps):
        comp = []
        for near, flip in ((near_u, False), (near_v, True)):
            d = e * min(near, length)
            while d < length / 2:
                k = round(d / length * den)
                comp.append(den - k if flip else k)
                d *= 1 + e
        ks.update(_thin(sorted(comp), math.ceil(4 / e)))
    ks = sorted(k for k in ks if 0 < k < den)
    if budget is not None:
        ks = _thin(ks, budget)
    return [Fraction(k, den) for k in ks]


def _edge_lengths(sub_):
    V = sub_.vertices
    vf = np.array([[float(p[0]), float(p[1])] for p in V])
    elen = {}
    inc = {}
    for i, j in sub_.edges:
        ln = float(np.hypot(*(vf[i] - vf[j])))
        elen[(i, j)] = ln
        inc.setdefault(i, []).append(ln)
        inc.setdefault(j, []).append(ln)
    out = {}
    for (i, j), ln in elen.items():
        out[(i, j)] = (ln, _nearest_other(inc[i], ln), _nearest_other(inc[j], ln))
    return out


def _nearest_other(lengths, ln):
    """Shortest edge at a vertex other than the current one (itself if alone)."""
    others = sorted(lengths)
    if len(others) == 1:
        return ln
    return others[1] if others[0] == ln else others[0]


def choose_budget(ws: WeightedSubdivision, eps: float, arc_budget: float):
    """None when the full Steiner graph has at most ``arc_budget`` arcs, else
    the largest per-edge cap that keeps the estimated arc count under it."""
    sub_ = ws.sub
    counts = {e: len(edge_parameters(ln, ni, nj, eps)) for e, (ln, ni, nj) in _edge_lengths(sub_).items()}

    def arcs(cap):
        total = 0
        for cyc in sub_.faces:
            m = len(cyc)
            k = sum(min(counts.get((cyc[a], cyc[(a + 1) % m]), counts.get((cyc[(a + 1) % m], cyc[a]), 0)),
                        cap if cap is not None else 1 << 30) + 1 for a in range(m))
            total += k * (k - 1) // 2
        return total

    if arcs(None) <= arc_budget:
        return None
    cap = max(counts.values(), default=1)
    lo, hi = 1, cap
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if arcs(mid) <= arc_budget:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _face_sides(poly):
    """Group consecutive collinear edges of a face cycle; side id per edge."""
    m = len(poly)
    side = [0] * m
    start = 0
    for k in range(m):
        if orient(poly[k - 1], poly[k], poly[(k + 1) % m]) != 0:
            start = k
            break
    sid = -1
    for off in range(m):
        k = (start + off) % m
        if off == 0 or orient(poly[k - 1], poly[k], poly[(k + 1) % m]) != 0:
            sid += 1
        side[k] = sid
    return side


def _segment_weight(ws: WeightedSubdivision, a, b) -> float:
    mid = ((Fraction(a[0]) + b[0]) / 2, (Fraction(a[1]) + b[1]) / 2)
    return ws.weights[locate(ws.sub, mid)]


def _faces_containing(sub_, p) -> list:
    x, y = float(p[0]), float(p[1])
    out = []
    for f, (x0, y0, x1, y1) in enumerate(sub_._bboxes()):
        if x0 <= x <= x1 and y0 <= y <= y1 and point_in_ring(p, sub_.face_polygon(f)) >= 0:
            out.append(f)
    return out


def discretize(ws: WeightedSubdivision, s: Point, t: Point, eps: float, budget: int | None = None) -> SteinerGraph:
    """Steiner graph of the weighted subdivision with s and t attached.

    ``budget`` caps the interior Steiner points per edge (used to bound the
    graph size on very fine subdivisions)."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    sub_ = ws.sub
    V = sub_.vertices
    points = list(V)
    chain = {}
    for (i, j), (ln, ni, nj) in _edge_lengths(sub_).items():
        ids = [i]
        a, b = V[i], V[j]
        for tt in edge_parameters(ln, ni, nj, eps, budget):
            q = _clean((a[0] + tt * (b[0] - a[0]), a[1] + tt * (b[1] - a[1])))
            ids.append(len(points))
            points.append(q)
        ids.append(j)
        chain[(i, j)] = ids
    xy = np.array([[float(p[0]), float(p[1])] for p in points])
    us, vs, cs = [], [], []
    # arcs along edges, weighted by the face the tie rule assigns
    for (i, j), ids in chain.items():
        fs = sub_.edge_faces.get(frozenset((i, j)), [])
        w = ws.weights[min(fs)] if fs else 0.0
        ids = np.array(ids)
        d = np.hypot(*(xy[ids[1:]] - xy[ids[:-1]]).T)
        us.append(ids[:-1])
        vs.append(ids[1:])
        cs.append(w * d)
    # arcs across faces
    for f, cyc in enumerate(sub_.faces):
        poly = [V[k] for k in cyc]
        side = _face_sides(poly)
        nsides = max(side) + 1
        ids = []
        mem = []
        m = len(cyc)
        for k in range(m):
            i, j = cyc[k], cyc[(k + 1) % m]
            seq = chain[(i, j)] if (i, j) in chain else chain[(j, i)][::-1]
            for pos, node in enumerate(seq[:-1]):
                ids.append(node)
                row = np.zeros(nsides, dtype=bool)
                row[side[k]] = True
                if pos == 0:
                    row[side[k - 1]] = True
                mem.append(row)
        ids = np.array(ids)
        M = np.array(mem)
        share = (M.astype(np.int32) @ M.T.astype(np.int32)) > 0
        a_idx, b_idx = np.nonzero(np.triu(~share, 1))
        if len(a_idx) == 0:
            continue
        ua, vb = ids[a_idx], ids[b_idx]
        d = np.hypot(*(xy[ua] - xy[vb]).T)
        us.append(ua)
        vs.append(vb)
        cs.append(ws.weights[f] * d)
    s_id, t_id = len(points), len(points) + 1
    points.extend([s, t])
    xy = np.vstack([xy, [[float(s[0]), float(s[1])], [float(t[0]), float(t[1])]]])
    fs_s = _faces_containing(sub_, s)
    fs_t = _faces_containing(sub_, t)
    if not fs_s or not fs_t:
        raise GeometryError("s or t lies outside the domain")
    for node_id, fs in ((s_id, fs_s), (t_id, fs_t)):
        p = points[node_id]
        targets = set()
        for f in fs:
            cyc = sub_.faces[f]
            m = len(cyc)
            for k in range(m):
                i, j = cyc[k], cyc[(k + 1) % m]
                targets.update(chain[(i, j)] if (i, j) in chain else chain[(j, i)])
        tl = sorted(targets)
        w = np.array([_segment_weight(ws, p, points[q]) if points[q] != p else 0.0 for q in tl])
        d = np.hypot(*(xy[tl] - xy[node_id]).T)
        us.append(np.full(len(tl), node_id))
        vs.append(np.array(tl))
        cs.append(w * d)
    if set(fs_s) & set(fs_t):
        us.append(np.array([s_id]))
        vs.append(np.array([t_id]))
        cs.append(np.array([_segment_weight(ws, s, t) * math.dist(xy[s_id], xy[t_id]) if s != t else 0.0]))
    u = np.concatenate(us).astype(np.int64)
    v = np.concatenate(vs).astype(np.int64)
    c = np.concatenate(cs)
    lo, hi = np.minimum(u, v), np.maximum(u, v)
    keep = lo != hi
    lo, hi, c = lo[keep], hi[keep], c[keep]
    order = np.lexsort((c, hi, lo))
    lo, hi, c = lo[order], hi[order], c[order]
    first = np.ones(len(lo), dtype=bool)
    first[1:] = (lo[1:] != lo[:-1]) | (hi[1:] != hi[:-1])
    lo, hi, c = lo[first], hi[first], c[first]
    stats = {"nodes": len(points), "arcs": int(len(lo)), "faces": len(sub_.faces), "eps": float(eps)}
    return SteinerGraph(points, xy, lo, hi, c, s_id, t_id, stats)


def _simplify(points: list) -> list:
    out = [points[0]]
    for q in points[1:]:
        if q == out[-1]:
            continue
        if len(out) >= 2 and orient(out[-2], out[-1], q) == 0:
            a, b = out[-2], out[-1]
            if (b[0] - a[0]) * (q[0] - b[0]) + (b[1] - a[1]) * (q[1] - b[1]) >= 0:
                out[-1] = q
                continue
        out.append(q)
    return out


def shortest_weighted_path(g: SteinerGraph, s=None, t=None) -> WeightedPathResult:
    s_id = g.s if s is None else s
    t_id = g.t if t is None else t
    n = g.node_count
    # zero-cost arcs must survive the sparse conversion
    c = np.where(g.cost > 0, g.cost, 1e-300)
    mat = coo_matrix((c, (g.u, g.v)), shape=(n, n)).tocsr()
    dist, pred = dijkstra(mat, directed=False, indices=s_id, return_predecessors=True)
    if not np.isfinite(dist[t_id]):
        raise GeometryError("t is unreachable from s")
    seq = [t_id]
    while seq[-1] != s_id:
        seq.append(int(pred[seq[-1]]))
    seq.reverse()
    path = _simplify([g.points[k] for k in seq])
    stats = dict(g.stats)
    stats["hops"] = len(seq) - 1
    return WeightedPathResult(path, float(dist[t_id]), stats)


def _crossing_params(sub_, a, b) -> list:
    """Parameters in [0, 1] where segment ab meets subdivision edges."""
    ts = {Fraction(0), Fraction(1)}
    ax, ay, bx, by = float(a[0]), float(a[1]), float(b[0]), float(b[1])
    x0, x1 = min(ax, bx) - 1e-9, max(ax, bx) + 1e-9
    y0, y1 = min(ay, by) - 1e-9, max(ay, by) + 1e-9
    V = sub_.vertices
    cache = getattr(sub_, "_fedges", None)
    if cache is None:
        cache = np.array([[float(V[i][0]), float(V[i][1]), float(V[j][0]), float(V[j][1])] for i, j in sub_.edges])
        sub_._fedges = cache
    E = cache
    cand = np.nonzero(
        (np.minimum(E[:, 0], E[:, 2]) <= x1) & (np.maximum(E[:, 0], E[:, 2]) >= x0)
        & (np.minimum(E[:, 1], E[:, 3]) <= y1) & (np.maximum(E[:, 1], E[:, 3]) >= y0)
    )[0]
    d = sub(b, a)
    dd = d[0] * d[0] + d[1] * d[1]
    for k in cand:
        i, j = sub_.edges[k]
        c, e = V[i], V[j]
        o1, o2 = orient(a, b, c), orient(a, b, e)
        if o1 * o2 > 0:
            continue
        o3, o4 = orient(c, e, a), orient(c, e, b)
        if o3 * o4 > 0:
            continue
        if o1 == 0 and o2 == 0:
            for q in (c, e):
                tq = Fraction((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / dd
                if 0 <= tq <= 1:
                    ts.add(tq)
            continue
        q = line_intersection(a, b, c, e)
        ts.add(Fraction((q[0] - a[0]) * d[0] + (q[1] - a[1]) * d[1]) / dd)
    return sorted(ts)


def path_cost(ws: WeightedSubdivision, path) -> float:
    """Sum over faces of weight times the length of the path inside the face."""
    total = 0.0
    for a, b in zip(path, path[1:]):
        if a == b:
            continue
        a = tuple(Fraction(x) for x in a)
        b = tuple(Fraction(x) for x in b)
        ts = _crossing_params(ws.sub, a, b)
        L = math.dist((float(a[0]), float(a[1])), (float(b[0]), float(b[1])))
        for t0, t1 in zip(ts, ts[1:]):
            tm = (t0 + t1) / 2
            mid = (a[0] + tm * (b[0] - a[0]), a[1] + tm * (b[1] - a[1]))
            total += ws.weights[locate(ws.sub, mid)] * float(t1 - t0) * L
    return total
