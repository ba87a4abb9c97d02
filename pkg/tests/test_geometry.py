from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from shapely.geometry import Point

from conftest import COMB, L_SHAPE, to_shapely
from secluded.geometry import (GeometryError, PolygonalDomain, cross, is_simple_ring, locate_point, orient,
                               polygon_area, ring_area2, segments_cross_properly, triangulate)

coord = st.one_of(st.integers(-50, 50), st.fractions(min_value=-50, max_value=50, max_denominator=1000))
point = st.tuples(coord, coord)


@given(point, point, point)
def test_orient_matches_exact_sign(a, b, c):
    v = cross(a, b, c)
    assert orient(a, b, c) == (v > 0) - (v < 0)


@given(point, point, st.fractions(min_value=0, max_value=1, max_denominator=10**6))
def test_orient_zero_on_collinear_points(a, b, u):
    c = (a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1]))
    assert orient(a, b, c) == 0


def test_orient_near_degenerate():
    a, b = (Fraction(0), Fraction(0)), (Fraction(10**6), Fraction(1))
    c = (Fraction(2 * 10**6), Fraction(2) + Fraction(1, 10**15))
    assert orient(a, b, c) == 1
    assert orient(a, b, (c[0], Fraction(2))) == 0


def test_orientation_normalized():
    d = PolygonalDomain(list(reversed(L_SHAPE)), [])
    assert ring_area2(d.outer) > 0
    h = PolygonalDomain([(0, 0), (10, 0), (10, 10), (0, 10)], [[(4, 4), (6, 4), (6, 6), (4, 6)]])
    assert ring_area2(h.holes[0]) < 0
    assert polygon_area(h) == 96


def test_rejects_bad_domains():
    with pytest.raises(GeometryError, match="not simple"):
        PolygonalDomain([(0, 0), (2, 2), (2, 0), (0, 2)])
    with pytest.raises(GeometryError, match="not interior"):
        PolygonalDomain([(0, 0), (4, 0), (4, 4), (0, 4)], [[(5, 5), (6, 5), (6, 6)]])
    with pytest.raises(GeometryError, match="integers"):
        PolygonalDomain([(0, 0), (Fraction(1, 2), 0), (0, 1)])


def test_is_simple_ring():
    assert is_simple_ring(COMB)
    assert not is_simple_ring([(0, 0), (2, 0), (0, 2), (2, 2)])


def test_proper_crossing():
    assert segments_cross_properly((0, 0), (2, 2), (0, 2), (2, 0))
    assert not segments_cross_properly((0, 0), (2, 2), (2, 2), (3, 0))


@pytest.mark.parametrize("ring", [L_SHAPE, COMB])
def test_triangulation_covers_area(ring):
    d = PolygonalDomain(ring)
    tri = triangulate(d)
    assert len(tri.triangles) == len(ring) - 2
    assert tri.area() == polygon_area(d)


def test_triangulation_with_hole(square_hole):
    tri = triangulate(square_hole)
    assert tri.area() == polygon_area(square_hole)


@given(st.fractions(min_value=-1, max_value=13, max_denominator=16), st.fractions(min_value=-1, max_value=7, max_denominator=16))
def test_contains_agrees_with_shapely(x, y):
    d = PolygonalDomain(COMB)
    poly = to_shapely(d)
    q = Point(float(x), float(y))
    if poly.exterior.distance(q) < 1e-9:
        assert locate_point(d, (x, y)) == "boundary"
    else:
        assert d.contains((x, y)) == poly.contains(q)
