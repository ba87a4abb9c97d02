import random
from fractions import Fraction

import pytest
from hypothesis import settings
from shapely.geometry import LineString, Point, Polygon

from secluded.geometry import PolygonalDomain

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

L_SHAPE = [(0, 0), (6, 0), (6, 2), (2, 2), (2, 6), (0, 6)]
COMB = [(0, 0), (12, 0), (12, 6), (10, 6), (10, 2), (8, 2), (8, 6), (6, 6), (6, 2), (4, 2), (4, 6), (2, 6), (2, 2), (0, 2)]
SQUARE_HOLE = ([(0, 0), (10, 0), (10, 10), (0, 10)], [[(4, 4), (4, 6), (6, 6), (6, 4)]])
# corridor with long niches behind s and t, collinear with the straight s-t path
NICHE = [(0, 1), (30, 1), (30, 0), (42, 0), (42, 1), (72, 1), (72, 2), (42, 2), (42, 3), (30, 3), (30, 2), (0, 2)]
NICHE_S, NICHE_T = (Fraction(31), Fraction(3, 2)), (Fraction(41), Fraction(3, 2))


@pytest.fixture
def l_shape():
    return PolygonalDomain(L_SHAPE)


@pytest.fixture
def comb():
    return PolygonalDomain(COMB)


@pytest.fixture
def square_hole():
    return PolygonalDomain(*SQUARE_HOLE)


@pytest.fixture
def rng():
    return random.Random(1234)


def to_shapely(domain):
    return Polygon([(float(x), float(y)) for x, y in domain.outer],
                   [[(float(x), float(y)) for x, y in h] for h in domain.holes])


def grid_visible_area(domain, p, step=0.125):
    """Oracle: count cell centres q of a fine grid whose segment pq stays in the domain."""
    poly = to_shapely(domain).buffer(1e-9)
    x0, y0, x1, y1 = (float(v) for v in domain.bbox)
    px, py = float(p[0]), float(p[1])
    count = 0
    nx, ny = int((x1 - x0) / step), int((y1 - y0) / step)
    for i in range(nx):
        for j in range(ny):
            q = (x0 + (i + 0.5) * step, y0 + (j + 0.5) * step)
            if not poly.contains(Point(q)):
                continue
            if poly.contains(LineString([(px, py), q])):
                count += 1
    return count * step * step


ACCEPTANCE = []


def record(number, ok, detail):
    line = "criterion %2d: %s  %s" % (number, "PASS" if ok else "FAIL", detail)
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
