import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conftest import COMB, SQUARE_HOLE
from secluded.formats import (FormatError, domain_from_dict, parse_cnf, parse_dimacs, parse_domain,
                              serialize_cnf, serialize_domain)
from secluded.geometry import PolygonalDomain
from secluded.sat import Cnf2, EmbeddedCnf2, random_cnf2, random_separable, random_separable_vc
from secluded.svg import render_svg

UNIT = '{"outer": [[0,0],[1,0],[1,1],[0,1]], "holes": []}'


def test_unit_square_round_trip():
    text = serialize_domain(*parse_domain(UNIT))
    assert serialize_domain(*parse_domain(text)) == text


def test_round_trip_normalizes_orientation():
    cw = json.dumps({"outer": [list(p) for p in reversed(COMB)], "s": [1, 1], "t": ["3/2", "1/3"]})
    text = serialize_domain(*parse_domain(cw))
    dom, s, t = parse_domain(text)
    assert dom.outer == PolygonalDomain(COMB).outer
    assert t == (Fraction(3, 2), Fraction(1, 3))
    assert serialize_domain(dom, s, t) == text


def test_hole_round_trip():
    d = PolygonalDomain(*SQUARE_HOLE)
    text = serialize_domain(d)
    assert parse_domain(text)[0].holes == d.holes


@pytest.mark.parametrize("doc, kind", [
    ("{oops", "malformed-json"),
    ('{"holes": []}', "missing-outer"),
    ('{"outer": [[0,0],[1,0]]}', "short-ring"),
    ('{"outer": [[0,0],[1.5,0],[0,1]]}', "non-integer"),
    ('{"outer": [[0,0],[1,0],[1]]}', "bad-point"),
    ('{"outer": [[0,0],[2,2],[2,0],[0,2]]}', "not-simple"),
    ('{"outer": [[0,0],[4,0],[4,4],[0,4]], "holes": [[[5,5],[6,5],[6,6]]]}', "hole-not-interior"),
    ('{"outer": [[0,0],[9,0],[9,9],[0,9]], "holes": [[[1,1],[4,1],[4,4]], [[2,1],[5,1],[5,4]]]}', "holes-overlap"),
    ('{"outer": [[0,0],[4,0],[4,4],[0,4]], "s": [5,5], "t": [1,1]}', "point-outside"),
])
def test_domain_diagnostics(doc, kind):
    with pytest.raises(FormatError) as exc:
        parse_domain(doc)
    assert exc.value.kind == kind


def test_dimacs_example():
    cnf = parse_cnf("p cnf 2 2\n1 2 0\n-1 -2 0\n")
    assert cnf == Cnf2(2, [(1, 2), (-1, -2)])


@pytest.mark.parametrize("text, kind", [
    ("1 2 0\n", "missing-header"),
    ("p cnf x 1\n1 0\n", "bad-header"),
    ("p cnf 2 1\n1 a 0\n", "bad-literal"),
    ("p cnf 2 1\n1 3 0\n", "literal-out-of-range"),
    ("p cnf 2 1\n1 2\n", "unterminated-clause"),
    ("p cnf 2 2\n1 2 0\n", "clause-count"),
    ("p cnf 3 1\n1 2 3 0\n", "clause-width"),
    ("p cnf 2 1\nc v-cycle 1 2\nc side 1 1 L\nc side 2 1 Q\n1 2 0\n", "bad-extension"),
    ("p cnf 2 1\nc v-cycle 1 2\nc side 1 5 L\n1 2 0\n", "side-out-of-range"),
    ("p cnf 2 1\nc vc-cycle v1 c1 v3\nc side 1 1 L\nc side 2 1 R\n1 2 0\n", "cycle-out-of-range"),
    ("p cnf 2 1\nc v-cycle 1 1\nc side 1 1 L\nc side 2 1 R\n1 2 0\n", "bad-embedding"),
])
def test_dimacs_diagnostics(text, kind):
    with pytest.raises(FormatError) as exc:
        parse_cnf(text)
    assert exc.value.kind == kind


@given(st.integers(0, 10**9))
def test_cnf_round_trip(seed):
    rng = random.Random(seed)
    for obj in (random_cnf2(rng, 4, 6), random_separable(rng, 4, 6), random_separable_vc(rng, 4, 5)):
        text = serialize_cnf(obj)
        back = parse_cnf(text)
        assert back == obj
        assert serialize_cnf(back) == text


def test_three_literal_clauses_parse_raw():
    n, clauses, _ = parse_dimacs("p cnf 3 1\n1 -2 3 0\n")
    assert (n, clauses) == (3, [(1, -2, 3)])


# ---------------------------------------------------------------------- svg

def test_svg_outline_only():
    d = PolygonalDomain(COMB)
    svg = render_svg(d)
    assert svg.startswith("<svg") and svg.count("<path") == 2 and "<polyline" not in svg


def test_svg_deterministic_and_single_path():
    d = PolygonalDomain(COMB)
    path = [(1, 1), (11, 1)]
    a = render_svg(d, paths=[path], faces=[([(0, 0), (2, 0), (2, 2)], 3.0), ([(2, 0), (4, 0), (4, 2)], 30.0)])
    b = render_svg(d, paths=[path], faces=[([(0, 0), (2, 0), (2, 2)], 3.0), ([(2, 0), (4, 0), (4, 2)], 30.0)])
    assert a == b
    assert a.count("<polyline") == 1


def test_svg_fixed_precision():
    d = PolygonalDomain([(0, 0), (3, 0), (0, 3)])
    svg = render_svg(d, points=[((1 / 3, 1 / 3), "p")])
    for tok in svg.replace('"', " ").replace(",", " ").split():
        if tok.replace(".", "", 1).isdigit() and "." in tok:
            assert len(tok.split(".")[1]) <= 4
