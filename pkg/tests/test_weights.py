import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import COMB, L_SHAPE, SQUARE_HOLE
from secluded.geometry import PolygonalDomain, foot_of_perpendicular, line_intersection
from secluded.harness import check_identity, check_sandwich, random_point
from secluded.subdivision import is_convex
from secluded.weights import (AnchorFrame, LevelSequence, anchor_delta, build_weighted_subdivision,
                              level_curve_abscissa, level_curve_point, rotating_triangle_area, weight_at)

BASE = ((0, 0), (10, 0))


def _shoelace(a, b, c):
    return abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2


@given(st.integers(-20, 20), st.integers(1, 20), st.integers(-20, 20), st.integers(1, 20),
       st.fractions(-20, 20, max_denominator=50), st.fractions(25, 60, max_denominator=50))
def test_rotating_triangle_area_matches_shoelace(ax, ay, bx, by, px, py):
    r, q, p = (ax, ay), (bx, by), (px, py)
    if r[1] == q[1] and r[0] == q[0]:
        return
    hr = line_intersection(p, r, *BASE)
    hq = line_intersection(p, q, *BASE)
    if hr is None or hq is None:
        return
    assert rotating_triangle_area(p, r, q, BASE) == pytest.approx(float(_shoelace(p, hr, hq)), rel=1e-9, abs=1e-9)


@given(st.floats(0.1, 50), st.floats(6, 30))
def test_level_curve_has_requested_area(A, y):
    r, q = (3, 2), (0, 4)
    pt = level_curve_point(A, r, q, BASE, y)
    assert rotating_triangle_area(pt, r, q, BASE) == pytest.approx(A, rel=1e-7)
    x = level_curve_abscissa(A, r, q, BASE, y)
    assert pt == pytest.approx((x, y))


@given(st.fractions(-30, 30, max_denominator=40), st.fractions(Fraction(1, 40), 30, max_denominator=40))
def test_anchor_delta_is_triangle_area(dx, dy):
    # anchor above a horizontal base, p beyond the anchor
    anchor = (4, 3)
    frame = AnchorFrame(anchor, BASE)
    p = (anchor[0] + dx, anchor[1] + dy)
    hit = line_intersection(p, anchor, *BASE)
    foot = foot_of_perpendicular(anchor, *BASE)
    assert anchor_delta(frame, p) == pytest.approx(float(_shoelace(anchor, foot, hit)), rel=1e-9, abs=1e-12)


@given(st.floats(1e-6, 1e4), st.sampled_from([0.5, 0.25, 0.1]))
def test_level_index_brackets_value(delta, eps):
    seq = LevelSequence(eps, 12, 100)
    i = seq.index_of(delta)
    assert delta <= seq.value(i) * (1 + 1e-12)
    assert i == 1 or delta > seq.value(i - 1)


def test_level_sequence_shape():
    seq = LevelSequence(0.25, 8, 10)
    assert seq.A1 == pytest.approx(0.25 / 16)
    vals = seq.values()
    assert vals[-1] >= 100
    assert all(b / a == pytest.approx(1.25) for a, b in zip(vals, vals[1:]))


@pytest.mark.parametrize("rings", [(L_SHAPE, []), (COMB, []), SQUARE_HOLE])
def test_cell_identity(rings):
    d = PolygonalDomain(*rings)
    rng = random.Random(7)
    pts = [random_point(d, rng) for _ in range(40)]
    assert check_identity(d, pts)["max_rel_error"] <= 1e-9


@pytest.mark.parametrize("eps", [0.5, 0.25])
def test_sandwich_small(eps):
    d = PolygonalDomain(L_SHAPE)
    rng = random.Random(3)
    rep = check_sandwich(d, eps, [random_point(d, rng) for _ in range(60)])
    assert rep["violations"] == []


def test_faces_convex_and_weights_positive():
    d = PolygonalDomain(COMB)
    ws = build_weighted_subdivision(d, 0.5)
    assert ws.sub.total_area() == ws.cells.total_area()
    for f in range(ws.face_count()):
        assert is_convex(ws.sub.face_polygon(f))
        assert ws.weights[f] > 0


def test_weight_lookup_consistent():
    d = PolygonalDomain(L_SHAPE)
    ws = build_weighted_subdivision(d, 0.5)
    f = 3
    p = ws.sub.representative(f)
    assert weight_at(ws, p) == ws.weights[f]


def test_rejects_non_positive_eps():
    with pytest.raises(ValueError):
        build_weighted_subdivision(PolygonalDomain(L_SHAPE), 0)
