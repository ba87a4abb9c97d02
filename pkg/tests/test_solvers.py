import math
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from conftest import COMB, L_SHAPE, SQUARE_HOLE
from secluded.geometry import GeometryError, PolygonalDomain, orient
from secluded.harness import random_point, random_simple_polygon
from secluded.solvers import (enumerate_signatures, essential_cut, integral_exposure, path_length,
                              secluded_path_holes, shortest_path_simple, signature_of)
from secluded.visibility import sees, visible_area, weak_visibility_area


def _fl(p):
    return (float(p[0]), float(p[1]))


def _vg_shortest(domain, s, t):
    """Oracle: Dijkstra over the visibility graph of the vertices plus s and t."""
    g = nx.Graph()
    nodes = list(domain.vertices) + [s, t]
    for i, u in enumerate(nodes):
        for v in nodes[i + 1:]:
            if u != v and domain.segment_inside(u, v):
                g.add_edge(u, v, weight=math.dist(_fl(u), _fl(v)))
    return nx.dijkstra_path_length(g, s, t)


@given(st.integers(0, 10**6))
def test_funnel_matches_visibility_graph(seed):
    rng = random.Random(seed)
    d = random_simple_polygon(rng, rng.randint(4, 14), size=32)
    s, t = random_point(d, rng), random_point(d, rng)
    path = shortest_path_simple(d, s, t)
    assert path[0] == s and path[-1] == t
    for a, b in zip(path, path[1:]):
        assert d.segment_inside(a, b)
    assert path_length(path) == pytest.approx(_vg_shortest(d, s, t), rel=1e-9)


def test_comb_path_bends_at_reflex_vertices():
    d = PolygonalDomain(COMB)
    path = shortest_path_simple(d, (3, 5), (11, 5))
    assert set(path[1:-1]) <= set(d.vertices)
    assert len(path) > 2


def test_holes_rejected_by_simple_solver(square_hole):
    with pytest.raises(GeometryError):
        shortest_path_simple(square_hole, (1, 1), (9, 9))


def test_essential_cut_separates():
    d = PolygonalDomain(L_SHAPE)
    p, s = (Fraction(5), Fraction(1)), (Fraction(1), Fraction(5))
    cut = essential_cut(d, p, s)
    assert cut.vertex == (2, 2)
    assert cut.chord == ((2, 2), (0, Fraction(8, 3)))
    a, b = cut.chord
    assert cut.s_side == orient(a, b, s) != 0
    # a point of V(p) just below the chord lies on the other side
    assert orient(a, b, (Fraction(1), Fraction(2))) == -cut.s_side
    assert essential_cut(d, p, (Fraction(1), Fraction(1))) is None


def test_square_hole_two_classes_symmetric(square_hole):
    res = secluded_path_holes(square_hole, (1, 5), (9, 5), max_crossings=1)
    assert len(res.candidates) >= 2
    areas = sorted(a for _, _, a in res.candidates)
    assert areas[0] == pytest.approx(areas[1], rel=1e-6)
    assert res.area == pytest.approx(areas[0])
    assert res.area == pytest.approx(weak_visibility_area(square_hole, res.path), rel=1e-9)


def test_signatures_are_reduced_and_distinct():
    sigs = list(enumerate_signatures(2, 2))
    assert len(sigs) == len(set(sigs))
    assert () in [s.word for s in sigs] or () in sigs


def test_signature_of_loop(square_hole):
    below = [(Fraction(1), Fraction(5)), (Fraction(5), Fraction(2)), (Fraction(9), Fraction(5))]
    above = [(Fraction(1), Fraction(5)), (Fraction(5), Fraction(8)), (Fraction(9), Fraction(5))]
    assert signature_of(square_hole, below) != signature_of(square_hole, above)


def test_secluded_beats_or_ties_every_candidate(square_hole):
    res = secluded_path_holes(square_hole, (2, 2), (8, 8), max_crossings=2)
    assert all(res.area <= a + 1e-9 for _, _, a in res.candidates)


def test_integral_exposure_against_riemann_sum():
    d = PolygonalDomain(L_SHAPE)
    path = [(Fraction(5), Fraction(1)), (Fraction(1), Fraction(1)), (Fraction(1), Fraction(5))]
    total = 0.0
    k = 400
    for a, b in zip(path, path[1:]):
        L = math.dist(_fl(a), _fl(b))
        for j in range(k):
            u = Fraction(2 * j + 1, 2 * k)
            q = (a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]))
            total += visible_area(d, q) * L / k
    assert integral_exposure(d, path) == pytest.approx(total, rel=1e-4)


def test_integral_exposure_convex_is_area_times_length():
    d = PolygonalDomain([(0, 0), (5, 0), (5, 3), (0, 3)])
    path = [(Fraction(1), Fraction(1)), (Fraction(4), Fraction(2))]
    assert integral_exposure(d, path) == pytest.approx(15 * math.hypot(3, 1), rel=1e-12)
