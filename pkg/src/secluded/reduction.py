"""Christmas-tree construction turning min2SAT into a minimum-exposure path
problem, plus the angle analysis that sizes it.

Tree coordinates: the apex of the tree is the origin, variable ``i`` has its
literal points at ``(-i, -i*h)`` (true) and ``(i, -i*h)`` (false), clauses sit
on the line ``y = H``.  Everything is multiplied by ``scale`` corridor widths
per tree unit and by ``grid`` integer points per corridor width.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import shapely
from shapely.geometry import LineString, MultiPolygon, Point as SPoint, Polygon, box

from .geometry import GeometryError, PolygonalDomain
from .sat import Cnf2, satisfied_count
from .visibility import polygon_area_float, visibility_polygon_fast, weak_visibility_area


class RegimeError(ValueError):
    """Parameters outside the range where the construction is valid."""


# ------------------------------------------------------------------ angles

def alpha_max(n: float, h: float, H: float) -> float:
    """Largest angle between the two corridors of a clause gadget."""
    if min(n, h, H) <= 0:
        raise RegimeError("n, h, H must be positive")
    return 2.0 * math.atan(n / (H + n * h))


def alpha_min(n: float, h: float, H: float, c: int) -> float:
    """Smallest angle at a midway crossing of corridors to different clauses."""
    if c < 3:
        raise RegimeError("need at least three clauses")
    if min(n, h, H) <= 0:
        raise RegimeError("n, h, H must be positive")
    d1 = H / h - 2.0 * H / (h * (c - 1)) - n
    d2 = H / h - (n - 1)
    if d1 <= 0 or d2 <= 0:
        raise RegimeError("non-positive denominator: H too small for n, c")
    return math.atan((H + n * h) / d1) - math.atan((H + (n - 1) * h) / d2)


def angle_ratio(n: float, h: float, H: float, c: int) -> float:
    return math.sin(alpha_min(n, h, H, c)) / math.sin(alpha_max(n, h, H))


def find_height(n: float, h: float, c: int, target: float | None = None,
                start: float = 1.0, limit: float = 1e12) -> float:
    """Doubling search for a height whose angle ratio exceeds ``target``
    (default 4c^2)."""
    if target is None:
        target = 4.0 * c * c
    H = start
    while H <= limit:
        try:
            if angle_ratio(n, h, H, c) > target:
                return H
        except RegimeError:
            pass
        H *= 2.0
    raise RegimeError("no height up to %g reaches ratio %g" % (limit, target))


def rhombus_area(alpha: float, width: float = 1.0) -> float:
    """Area of the crossing of two strips of the given width at angle alpha."""
    return width * width / math.sin(alpha)


def centerline_angle(p1, q1, p2, q2) -> float:
    """Unsigned angle between segment directions, folded into [0, pi/2]."""
    a = math.atan2(q1[1] - p1[1], q1[0] - p1[0]) - math.atan2(q2[1] - p2[1], q2[0] - p2[0])
    a = abs(math.remainder(a, math.pi))
    return a


# ------------------------------------------------------------------ layout

@dataclass(frozen=True)
class TreeParams:
    H: float = 512.0
    h: float = 1.0
    scale: float = 24.0  # corridor widths per tree unit
    width: float = 1.0
    grid: int = 8  # integer points per corridor width
    spread: float = 0.5  # used fraction of the clause line
    equalizers: bool = True
    equalize_clauses: bool = True
    chambers: bool = False
    chamber_area: float | None = None


@dataclass
class ReductionLayout:
    domain: PolygonalDomain
    params: TreeParams
    s: tuple
    t: tuple
    apexes: list  # apex of triangle i at index i-1, plus the bottom junction
    literal_point: dict  # literal -> integer point
    clause_point: list
    literal_corridor: dict  # literal -> list of (start, end) centerlines
    tree_corridors: list
    clause_gadget: dict  # clause index -> list of polygon vertices
    equalizer: dict = field(default_factory=dict)  # literal -> (start, end)
    chamber: dict = field(default_factory=dict)
    a: float = 0.0
    A: float | None = None
    midway: list = field(default_factory=list)  # (clause i, clause j, area)

    @property
    def corridor_count(self) -> int:
        return len(self.tree_corridors) + sum(len(v) for v in self.literal_corridor.values())

    def path_for(self, assignment) -> list:
        """Canonical tree path: through the left point of every true variable
        and the right point of every false one."""
        out = [self.s]
        for i, val in enumerate(assignment, start=1):
            out.append(self.literal_point[i if val else -i])
            out.append(self.apexes[i])
        out.append(self.t)
        return out


def _strip(p, q, half, ext0=0.0, ext1=0.0) -> Polygon:
    d = np.subtract(q, p).astype(float)
    d /= np.hypot(*d)
    nrm = np.array([-d[1], d[0]]) * half
    a = np.asarray(p, float) - d * ext0
    b = np.asarray(q, float) + d * ext1
    return Polygon([a + nrm, a - nrm, b - nrm, b + nrm])


def _halfplane(origin, normal, big) -> Polygon:
    """{x : normal . (x - origin) <= 0} clipped to a square of radius big."""
    nrm = np.asarray(normal, float)
    nrm /= np.hypot(*nrm)
    tng = np.array([-nrm[1], nrm[0]])
    o = np.asarray(origin, float)
    return Polygon([o + tng * big, o - tng * big, o - tng * big - nrm * big, o + tng * big - nrm * big])


def _to_domain(geom) -> PolygonalDomain:
    geom = shapely.set_precision(geom, 1.0)
    geom = geom.simplify(0.0)
    if isinstance(geom, MultiPolygon) or geom.geom_type != "Polygon" or geom.is_empty:
        raise RegimeError("corridor union is not a single polygon")
    outer = [(int(round(x)), int(round(y))) for x, y in list(geom.exterior.coords)[:-1]]
    holes = [[(int(round(x)), int(round(y))) for x, y in list(r.coords)[:-1]] for r in geom.interiors]
    try:
        return PolygonalDomain(outer, holes)
    except GeometryError as exc:
        raise RegimeError("snapped layout is degenerate (%s); raise grid or scale" % exc) from exc


def build_christmas_tree(cnf: Cnf2, params: TreeParams | None = None) -> ReductionLayout:
    p = params or TreeParams()
    n, c = cnf.num_vars, len(cnf.clauses)
    if n < 1:
        raise RegimeError("need at least one variable")
    for k, cl in enumerate(cnf.clauses):
        if len(cl) != 2 or cl[0] == cl[1]:
            raise RegimeError("clause %d must have two distinct literals" % (k + 1))
    if not (0 < p.spread < 1):
        raise RegimeError("spread must lie in (0, 1)")
    if p.H <= 0 or p.h <= 0:
        raise RegimeError("H and h must be positive")
    W = p.width * p.grid
    U = p.scale * W
    half = W / 2.0

    def pt(x, y):
        return (int(round(x * U)), int(round(y * U)))

    apexes = [pt(0, -(i - 1) * p.h) for i in range(1, n + 2)]
    lit_pt = {}
    for i in range(1, n + 1):
        lit_pt[i] = pt(-i, -i * p.h)
        lit_pt[-i] = pt(i, -i * p.h)
    s = apexes[0]
    t = pt(0, -(n + 1) * p.h)
    if c == 1:
        xs = [0.0]
    else:
        xs = [p.spread * (-p.H / p.h + j * 2.0 * p.H / (p.h * (c - 1))) for j in range(c)]
    clause_pt = [pt(x, p.H) for x in xs]

    tree = []
    for i in range(1, n + 1):
        tree.append((apexes[i - 1], lit_pt[i]))
        tree.append((apexes[i - 1], lit_pt[-i]))
        tree.append((lit_pt[i], lit_pt[-i]))
    tree.append((apexes[n], t))
    pieces = [_strip(a, b, half) for a, b in tree]
    nodes = set(apexes) | set(lit_pt.values()) | {t}
    pieces += [SPoint(v).buffer(half * 1.25, quad_segs=1) for v in nodes]
    tree_geom = shapely.union_all(pieces)

    big = 4 * U * (p.H + (n + 1) * p.h + n + 1)
    corridors = {}
    gadgets = {}
    lit_geoms = {}
    for k, (l1, l2) in enumerate(cnf.clauses):
        q = clause_pt[k]
        P1, P2 = lit_pt[l1], lit_pt[l2]
        for P in (P1, P2):
            seg = LineString([P, q])
            inner = seg.interpolate(half * 4).coords[0]
            if LineString([inner, q]).intersects(shapely.buffer(tree_geom, -half * 0.25)):
                raise RegimeError("a literal-clause corridor meets the tree; increase H or lower spread")
        s1 = _strip(P1, q, half, ext1=big)
        s2 = _strip(P2, q, half, ext1=big)
        gad = s1.intersection(s2)
        if gad.is_empty or gad.area <= 0:
            raise RegimeError("degenerate clause gadget")
        # cut each corridor at the far side of the other strip
        parts = []
        for (Pa, sa), (Pb, _sb) in (((P1, s1), (P2, s2)), ((P2, s2), (P1, s1))):
            db = np.subtract(q, Pb).astype(float)
            nb = np.array([-db[1], db[0]])
            if np.dot(nb, np.subtract(Pa, q)) > 0:
                nb = -nb
            nb /= np.hypot(*nb)
            edge = np.asarray(q, float) + nb * half
            piece = sa.intersection(_halfplane(edge, nb, big))
            parts.append(piece)
        corridors.setdefault(l1, []).append((P1, q))
        corridors.setdefault(l2, []).append((P2, q))
        lit_geoms.setdefault(l1, []).append(parts[0])
        lit_geoms.setdefault(l2, []).append(parts[1])
        gadgets[k] = gad

    areas = {k: g.area for k, g in gadgets.items()}
    a = min(areas.values()) if areas else 0.0
    cuts = []
    if p.equalize_clauses:
        for k, g in gadgets.items():
            if areas[k] <= a * (1 + 1e-9):
                continue
            gx0, gy0, gx1, gy1 = g.bounds
            lo, hi = gy0, gy1
            for _ in range(80):
                mid = (lo + hi) / 2
                if g.intersection(box(gx0 - 1, gy0 - 1, gx1 + 1, mid)).area < a:
                    lo = mid
                else:
                    hi = mid
            cuts.append(box(gx0 - W, hi, gx1 + W, gy1 + 2 * W))
            gadgets[k] = g.intersection(box(gx0 - 1, gy0 - 1, gx1 + 1, hi))

    def assemble(extra):
        geom = shapely.union_all([tree_geom] + [x for v in lit_geoms.values() for x in v] + list(gadgets.values()) + extra)
        for cb in cuts:
            geom = geom.difference(cb)
        return geom

    # equalizers leave the literal outwards, below the fan of clause corridors
    elev = [abs(math.atan2(q[1] - P[1], q[0] - P[0])) for segs in corridors.values() for P, q in segs]
    elev = [min(e, math.pi - e) for e in elev]
    tilt = (min(elev) if elev else math.pi / 3) / 2
    equal = {}
    extra = []
    domain = _to_domain(assemble(extra))
    if p.equalizers:
        lengths = {}
        for _ in range(8):
            worst = 0.0
            for i in range(1, n + 1):
                va = _seen_at(domain, lit_pt[i]) - a * _degree(cnf, i)
                vb = _seen_at(domain, lit_pt[-i]) - a * _degree(cnf, -i)
                d = va - vb
                worst = max(worst, abs(d) / max(a, 1.0))
                low = -i if d > 0 else i
                if abs(d) > 0.005 * max(a, W * W):
                    lengths[low] = max(0.0, lengths.get(low, 0.0) + abs(d) / W)
                    other = -low
                    if lengths.get(other, 0.0) > 0:
                        # shrink the opposite one first when it overshot
                        take = min(lengths[other], abs(d) / W)
                        lengths[other] -= take
                        lengths[low] -= take
            if worst <= 0.005:
                break
            extra = []
            equal = {}
            for lit, ln in lengths.items():
                if ln <= 0:
                    continue
                P = lit_pt[lit]
                ux = math.cos(tilt) * (-1 if lit > 0 else 1)
                Q = (int(round(P[0] + ln * ux)), int(round(P[1] + ln * math.sin(tilt))))
                equal[lit] = (P, Q)
                extra.append(_strip(P, Q, half))
            domain = _to_domain(assemble(extra))

    chambers = {}
    if p.chambers:
        area = p.chamber_area
        if area is None:
            raise RegimeError("chamber_area is required when chambers are on")
        side = math.sqrt(area)
        for lit, segs in corridors.items():
            for P, q in segs:
                d = np.subtract(q, P).astype(float)
                L = np.hypot(*d)
                ctr = np.asarray(P, float) + d / L * min(L / 4, 6 * W + side)
                sq = box(ctr[0] - side / 2, ctr[1] - side / 2, ctr[0] + side / 2, ctr[1] + side / 2)
                chambers.setdefault(lit, []).append(tuple(map(float, ctr)))
                extra.append(sq)
        domain = _to_domain(assemble(extra))

    layout = ReductionLayout(
        domain=domain,
        params=p,
        s=s,
        t=t,
        apexes=apexes,
        literal_point=lit_pt,
        clause_point=clause_pt,
        literal_corridor=corridors,
        tree_corridors=tree,
        clause_gadget={k: [tuple(map(float, xy)) for xy in list(g.exterior.coords)[:-1]] for k, g in gadgets.items()},
        equalizer=equal,
        chamber=chambers,
        a=a,
    )
    layout.midway = midway_areas(layout, cnf)
    return layout


def _degree(cnf: Cnf2, lit: int) -> int:
    return sum(1 for cl in cnf.clauses if lit in cl)


def _seen_at(domain: PolygonalDomain, q) -> float:
    return polygon_area_float(visibility_polygon_fast(domain, q))


def _clause_lines(layout: ReductionLayout, cnf: Cnf2):
    out = []
    for k, cl in enumerate(cnf.clauses):
        for lit in cl:
            out.append((k, lit, layout.literal_point[lit], layout.clause_point[k]))
    return out


def midway_areas(layout: ReductionLayout, cnf: Cnf2):
    """Areas of the crossings between corridors leading to different clauses,
    measured on explicit strips; endpoints excluded."""
    W = layout.params.width * layout.params.grid
    half = W / 2
    lines = _clause_lines(layout, cnf)
    out = []
    for (k1, l1, p1, q1), (k2, l2, p2, q2) in itertools.combinations(lines, 2):
        if k1 == k2 or l1 == l2 or p1 == p2:
            continue
        a, b = LineString([p1, q1]), LineString([p2, q2])
        if not a.crosses(b):
            continue
        x = a.intersection(b)
        if min(x.distance(SPoint(p)) for p in (p1, q1, p2, q2)) < 2 * W:
            continue
        r = _strip(p1, q1, half).intersection(_strip(p2, q2, half))
        out.append((k1, k2, float(r.area)))
    return out


# ---------------------------------------------------------------- verifier

def verify_reduction(layout: ReductionLayout, cnf: Cnf2, refinement: int = 2) -> dict:
    """Seen area of every canonical tree path against its satisfied-clause count."""
    rows = []
    for bits in itertools.product((False, True), repeat=cnf.num_vars):
        path = layout.path_for(bits)
        area = weak_visibility_area(layout.domain, path, refinement, chords=False)
        rows.append({"assignment": [int(b) for b in bits], "k": satisfied_count(cnf, bits), "area": area})
    by_k = {}
    for r in rows:
        by_k.setdefault(r["k"], []).append(r["area"])
    ks = sorted(by_k)
    violations = []
    gaps = []
    a = layout.a
    for k0, k1 in zip(ks, ks[1:]):
        if max(by_k[k0]) >= min(by_k[k1]):
            violations.append("k=%d sees at least as much as k=%d" % (k0, k1))
        gap = (float(np.mean(by_k[k1])) - float(np.mean(by_k[k0]))) / (k1 - k0)
        gaps.append(gap)
        if abs(gap - a) > 0.25 * a:
            violations.append("gap %.4g between k=%d and k=%d is not within 25%% of a=%.4g" % (gap, k0, k1, a))
    spread = {k: max(v) - min(v) for k, v in by_k.items()}
    A = float(np.mean([r["area"] - r["k"] * a for r in rows]))
    layout.A = A
    return {
        "rows": rows,
        "a": a,
        "A": A,
        "gaps": gaps,
        "spread_within_k": spread,
        "monotone": not any(v.startswith("k=") for v in violations),
        "violations": violations,
        "ok": not violations,
    }
