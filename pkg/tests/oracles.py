"""Independent reference computations used by the property and acceptance tests."""
import math

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from shapely import contains_xy, prepare
from shapely.geometry import Polygon

from secluded.visibility import polygon_area_float, visibility_polygon_fast

# 16-neighbourhood: all primitive steps with |dx|, |dy| <= 2
_STEPS = [(dx, dy) for dx in range(-2, 3) for dy in range(-2, 3) if (dx, dy) != (0, 0) and math.gcd(dx, dy) == 1]


def _shape(domain):
    poly = Polygon([(float(x), float(y)) for x, y in domain.outer],
                   [[(float(x), float(y)) for x, y in h] for h in domain.holes])
    prepare(poly)
    return poly


def grid_exposure_optimum(domain, s, t, spacing=1 / 32):
    """Minimum integral exposure over paths in a grid graph of the given spacing.

    Nodes are lattice points strictly inside the domain plus s and t; arcs join
    16-neighbours whose segment stays inside (sampled at quarter points); an arc
    costs its length times the mean of |V| at its ends."""
    poly = _shape(domain)
    x0, y0, x1, y1 = (float(v) for v in domain.bbox)
    xs = np.arange(x0, x1 + spacing / 2, spacing)
    ys = np.arange(y0, y1 + spacing / 2, spacing)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    inside = contains_xy(poly, gx, gy)
    idx = -np.ones(gx.shape, dtype=np.int64)
    idx[inside] = np.arange(inside.sum())
    pts = np.column_stack([gx[inside], gy[inside]])
    s_f, t_f = (float(s[0]), float(s[1])), (float(t[0]), float(t[1]))
    pts = np.vstack([pts, [s_f, t_f]])
    vis = np.array([polygon_area_float(visibility_polygon_fast(domain, (x, y))) for x, y in pts])
    S, T = len(pts) - 2, len(pts) - 1
    us, vs = [], []
    I, J = np.nonzero(inside)
    for dx, dy in _STEPS:
        if (dx, dy) < (0, 0):
            continue
        I2, J2 = I + dx, J + dy
        ok = (I2 >= 0) & (I2 < gx.shape[0]) & (J2 >= 0) & (J2 < gx.shape[1])
        a, b = idx[I[ok], J[ok]], idx[I2[ok], J2[ok]]
        keep = b >= 0
        a, b = a[keep], b[keep]
        mid_ok = np.ones(len(a), bool)
        for f in (0.25, 0.5, 0.75):
            m = pts[a] * (1 - f) + pts[b] * f
            mid_ok &= contains_xy(poly, m[:, 0], m[:, 1])
        us.append(a[mid_ok])
        vs.append(b[mid_ok])
    # attach s and t to nearby lattice nodes they see directly
    for k, (px, py) in ((S, s_f), (T, t_f)):
        near = np.nonzero(np.hypot(pts[:S, 0] - px, pts[:S, 1] - py) <= 2.5 * spacing)[0]
        for f in (0.25, 0.5, 0.75):
            m = pts[near] * (1 - f) + np.array([px, py]) * f
            near = near[contains_xy(poly, m[:, 0], m[:, 1])]
        us.append(near)
        vs.append(np.full(len(near), k))
    u, v = np.concatenate(us), np.concatenate(vs)
    length = np.hypot(*(pts[u] - pts[v]).T)
    cost = length * (vis[u] + vis[v]) / 2
    mat = coo_matrix((cost, (u, v)), shape=(len(pts), len(pts))).tocsr()
    dist = dijkstra(mat, directed=False, indices=S)
    return float(dist[T])
