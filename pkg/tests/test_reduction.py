import math

import pytest
from hypothesis import given, strategies as st
from shapely.geometry import LineString, Polygon

from secluded.geometry import is_simple_ring
from secluded.reduction import (RegimeError, TreeParams, alpha_max, alpha_min, angle_ratio, build_christmas_tree,
                                centerline_angle, find_height, rhombus_area, verify_reduction)
from secluded.sat import Cnf2
from secluded.visibility import weak_visibility_area


def test_alpha_max_values():
    assert alpha_max(1, 1, 1) == pytest.approx(0.92730, abs=1e-5)
    assert alpha_max(3, 1, 100) == pytest.approx(2 * math.atan(3 / 103), rel=1e-15)


@given(st.floats(1, 1e6), st.floats(1.001, 10))
def test_alpha_max_decreasing_in_height(H, f):
    assert alpha_max(3, 1, H * f) < alpha_max(3, 1, H)


def test_alpha_min_printed_formula():
    n, h, H, c = 3, 1, 100, 4
    want = math.atan((H + n * h) / (H / h - 2 * H / (h * (c - 1)) - n)) - math.atan((H + (n - 1) * h) / (H / h - (n - 1)))
    assert alpha_min(n, h, H, c) == pytest.approx(want, rel=1e-15)


def test_alpha_min_many_clauses_limit():
    n, h, H = 3, 1, 100
    limit = math.atan((H + n * h) / (H / h - n)) - math.atan((H + (n - 1) * h) / (H / h - (n - 1)))
    assert alpha_min(n, h, H, 10**9) == pytest.approx(limit, rel=1e-6)


@pytest.mark.parametrize("H", [100.0, 1e3, 1e4, 1e5])
@pytest.mark.parametrize("n, c", [(1, 4), (3, 4), (5, 8)])
def test_alpha_min_positive_in_regime(n, c, H):
    assert alpha_min(n, 1, H, c) > 0


def test_alpha_min_regime_errors():
    with pytest.raises(RegimeError):
        alpha_min(3, 1, 100, 2)
    with pytest.raises(RegimeError):
        alpha_min(3, 1, 4, 4)


@pytest.mark.parametrize("n, h, H, c", [(3, 1, 100, 4), (2, 1, 1000, 5), (5, 2, 500, 7)])
def test_angles_match_centerlines(n, h, H, c):
    top = (0.0, H)
    assert centerline_angle(top, (-n, -n * h), top, (n, -n * h)) == pytest.approx(alpha_max(n, h, H), abs=1e-6)
    # last clause to the false point of variable n-1, second-to-last to that of n
    last, second = (H / h, H), (H / h - 2 * H / (h * (c - 1)), H)
    got = centerline_angle(second, (n, -n * h), last, (n - 1, -(n - 1) * h))
    assert got == pytest.approx(alpha_min(n, h, H, c), abs=1e-6)


def test_ratio_increasing_and_search():
    vals = [angle_ratio(3, 1, H, 4) for H in (1e3, 1e4, 1e5, 1e6)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    H = find_height(3, 1, 4)
    assert H <= 1e9 and angle_ratio(3, 1, H, 4) > 64


@pytest.mark.parametrize("alpha", [math.pi / 2, math.pi / 3, 0.2])
def test_rhombus_area_against_strips(alpha):
    assert rhombus_area(math.pi / 2) == pytest.approx(1.0)
    big = 50.0
    s1 = Polygon([(-big, -0.5), (big, -0.5), (big, 0.5), (-big, 0.5)])
    d = (math.cos(alpha), math.sin(alpha))
    nrm = (-d[1] * 0.5, d[0] * 0.5)
    s2 = Polygon([(-big * d[0] + nrm[0], -big * d[1] + nrm[1]), (big * d[0] + nrm[0], big * d[1] + nrm[1]),
                  (big * d[0] - nrm[0], big * d[1] - nrm[1]), (-big * d[0] - nrm[0], -big * d[1] - nrm[1])])
    assert s1.intersection(s2).area == pytest.approx(rhombus_area(alpha), rel=1e-9)


# ------------------------------------------------------------------- layout

def test_tautology_layout_valid():
    lay = build_christmas_tree(Cnf2(1, [(1, -1)]))
    d = lay.domain
    assert is_simple_ring(d.outer) and all(is_simple_ring(h) for h in d.holes)
    assert d.contains(lay.s) and d.contains(lay.t)


def test_tree_shape():
    cnf = Cnf2(3, [(1, 2), (-1, 3), (2, -3)])
    lay = build_christmas_tree(cnf)
    U = lay.params.scale * lay.params.width * lay.params.grid
    for i in range(1, 4):
        assert lay.literal_point[-i][0] - lay.literal_point[i][0] == pytest.approx(2 * i * U)
    ys = {q[1] for q in lay.clause_point}
    assert ys == {round(lay.params.H * U)}
    assert lay.corridor_count == len(lay.tree_corridors) + 2 * len(cnf)
    assert len(lay.tree_corridors) == 3 * 3 + 1


def test_literal_corridors_avoid_tree():
    cnf = Cnf2(3, [(1, 2), (-1, 3), (2, -3), (-2, -1)])
    lay = build_christmas_tree(cnf)
    half = lay.params.width * lay.params.grid / 2
    tree = [LineString([a, b]) for a, b in lay.tree_corridors]
    for lit, segs in lay.literal_corridor.items():
        for P, q in segs:
            seg = LineString([P, q])
            clear = LineString([seg.interpolate(6 * half).coords[0], q])
            assert all(clear.distance(t) > half for t in tree)


def test_equalized_single_variable_paths():
    lay = build_christmas_tree(Cnf2(1, [(1, -1)]))
    a1 = weak_visibility_area(lay.domain, lay.path_for([True]), 2, chords=False)
    a0 = weak_visibility_area(lay.domain, lay.path_for([False]), 2, chords=False)
    assert abs(a1 - a0) <= 0.01 * max(a0, a1)


def test_midway_areas_small_past_threshold():
    cnf = Cnf2(3, [(1, 2), (-1, 3), (2, -3), (-2, -1)])
    c = len(cnf)
    lay = build_christmas_tree(cnf, TreeParams(H=2048.0))
    assert lay.midway
    assert max(m[2] for m in lay.midway) <= lay.a / (4 * c * c)


def test_verify_single_clause():
    cnf = Cnf2(2, [(1, 2)])
    rep = verify_reduction(build_christmas_tree(cnf), cnf)
    k0 = [r["area"] for r in rep["rows"] if r["k"] == 0]
    k1 = [r["area"] for r in rep["rows"] if r["k"] == 1]
    assert max(k0) < min(k1)
    assert rep["ok"]


def test_verify_tautology_flat():
    cnf = Cnf2(1, [(1, -1)])
    rep = verify_reduction(build_christmas_tree(cnf), cnf)
    areas = [r["area"] for r in rep["rows"]]
    assert max(areas) - min(areas) <= 1e-3 * max(areas)


def test_rejects_bad_clause():
    with pytest.raises(RegimeError):
        build_christmas_tree(Cnf2(1, [(1,)]))
