import itertools
import random

import pytest
from hypothesis import given, strategies as st

from secluded.sat import (LEFT, RIGHT, Cnf2, EmbeddedCnf2, SatError, brute_force_opt, clause_conflict_graph,
                          is_monotone, max2sat_separable_vc, min2sat_monotone, min2sat_separable, random_cnf2,
                          random_monotone, random_separable, random_separable_vc, reduce_1in3_to_max2sat,
                          reduce_max2sat_to_min2sat, reduce_max2sat_to_min2sat_embedded, satisfied_count,
                          split_variable_gadget)

seeds = st.integers(0, 2**32 - 1)


def _exhaustive_cover(h):
    """Oracle: smallest vertex set touching every edge, by enumeration."""
    for k in range(len(h.vertices) + 1):
        for cand in itertools.combinations(h.vertices, k):
            cs = set(cand)
            if all(e & cs for e in h.edges):
                return k


def test_brute_force_small():
    cnf = Cnf2(2, [(1, 2), (-1, -2)])
    assert brute_force_opt(cnf, "min") == (1, (False, False))
    assert brute_force_opt(cnf, "max") == (2, (False, True))


@given(seeds)
def test_separable_equals_brute_force(seed):
    rng = random.Random(seed)
    e = random_separable(rng, rng.randint(1, 8), rng.randint(0, 14))
    val, a = min2sat_separable(e)
    assert val == brute_force_opt(e.cnf, "min")[0]
    assert satisfied_count(e.cnf, a) == val


@given(seeds)
def test_monotone_equals_brute_force(seed):
    rng = random.Random(seed)
    cnf = random_monotone(rng, rng.randint(1, 8), rng.randint(0, 14))
    val, a = min2sat_monotone(cnf)
    assert val == brute_force_opt(cnf, "min")[0]
    assert satisfied_count(cnf, a) == val


@given(seeds)
def test_cover_size_matches_exhaustive(seed):
    rng = random.Random(seed)
    cnf = random_monotone(rng, rng.randint(1, 5), rng.randint(1, 12))
    assert min2sat_monotone(cnf)[0] == _exhaustive_cover(clause_conflict_graph(cnf))


@given(seeds)
def test_separable_conflict_graph_is_bipartite(seed):
    rng = random.Random(seed)
    e = random_separable(rng, rng.randint(1, 6), rng.randint(1, 12))
    assert clause_conflict_graph(e.cnf).is_bipartite()


def test_unit_clause_conflicts_with_negation():
    h = clause_conflict_graph(Cnf2(2, [(1,), (-1, 2), (2,)]))
    assert h.edges == {frozenset((0, 1))}


def test_rejects_wrong_class():
    with pytest.raises(SatError):
        min2sat_monotone(Cnf2(2, [(1, -2)]))
    e = EmbeddedCnf2(Cnf2(1, [(1,), (-1,)]), (1,), {(1, 0): LEFT, (1, 1): LEFT})
    with pytest.raises(SatError):
        min2sat_separable(e)
    with pytest.raises(SatError):
        Cnf2(2, [(1, 2, -1)])
    with pytest.raises(SatError):
        Cnf2(1, [(2,)])


# --------------------------------------------------------------- reductions

@given(seeds)
def test_max_to_min_relation(seed):
    rng = random.Random(seed)
    cnf = random_cnf2(rng, rng.randint(1, 5), rng.randint(0, 8))
    red = reduce_max2sat_to_min2sat(cnf)
    assert brute_force_opt(cnf, "max")[0] == 2 * len(cnf) - brute_force_opt(red, "min")[0]


def test_same_sign_fresh_variable_pair_fails_on_single_clause():
    # (-x v w), (-y v w) can both be falsified with x = y = True, w = False,
    # which would make max{x v y} = 2 - 0 = 2 instead of 1
    literal = Cnf2(3, [(-1, 3), (-2, 3)])
    assert brute_force_opt(literal, "min")[0] == 0
    fixed = reduce_max2sat_to_min2sat(Cnf2(2, [(1, 2)]))
    assert 2 * 1 - brute_force_opt(fixed, "min")[0] == 1


@given(seeds)
def test_max_to_min_embedded_keeps_separability(seed):
    rng = random.Random(seed)
    e = random_separable_vc(rng, rng.randint(2, 5), rng.randint(1, 6))
    red = reduce_max2sat_to_min2sat_embedded(e)
    assert red.is_separable()


@given(seeds)
def test_max_separable_vc_equals_brute_force(seed):
    rng = random.Random(seed)
    e = random_separable_vc(rng, rng.randint(2, 8), rng.randint(1, 10))
    val, a = max2sat_separable_vc(e)
    assert val == brute_force_opt(e.cnf, "max")[0]
    assert satisfied_count(e.cnf, a) == val


def test_max_separable_vc_single_clause():
    cnf = Cnf2(2, [(1, 2)])
    e = EmbeddedCnf2(cnf, (1, 2), {(1, 0): LEFT, (2, 0): RIGHT}, (("v", 1), ("c", 0), ("v", 2)))
    assert max2sat_separable_vc(e)[0] == 1


@pytest.mark.parametrize("bits", list(itertools.product((False, True), repeat=3)))
def test_one_in_three_profile(bits):
    cnf = reduce_1in3_to_max2sat(3, [(1, 2, 3)])
    expected = {0: 6, 1: 7, 2: 6, 3: 3}[sum(bits)]
    assert satisfied_count(cnf, bits) == expected


@given(seeds)
def test_one_in_three_iff_seven_per_clause(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 6)
    cl = [tuple(rng.choice((1, -1)) * v for v in rng.sample(range(1, n + 1), 3)) for _ in range(rng.randint(1, 3))]
    best = brute_force_opt(reduce_1in3_to_max2sat(n, cl), "max")[0]
    sat = any(all(sum((a[abs(l) - 1] if l > 0 else not a[abs(l) - 1]) for l in c) == 1 for c in cl)
              for a in itertools.product((False, True), repeat=n))
    assert (best == 7 * len(cl)) == sat


@given(seeds)
def test_split_shifts_max_by_4n(seed):
    rng = random.Random(seed)
    cnf = random_cnf2(rng, rng.randint(1, 3), rng.randint(1, 4))
    y = rng.randint(1, cnf.num_vars)
    N = 2 * len(cnf) + 1
    big = split_variable_gadget(cnf, y, N)
    val, a = brute_force_opt(big, "max")
    assert val == brute_force_opt(cnf, "max")[0] + 4 * N
    z, t = cnf.num_vars, cnf.num_vars + 1
    assert a[y - 1] == (not a[z]) == a[t]


def test_split_monotonizes_mixed_clauses():
    big = split_variable_gadget(Cnf2(2, [(1, -2)]), 2, 3)
    assert big.clauses[0] == (1, 3)
    assert is_monotone(Cnf2(big.num_vars, big.clauses[:1]))


def test_split_rejects_small_n():
    with pytest.raises(SatError):
        split_variable_gadget(Cnf2(2, [(1, 2), (1, -2)]), 1, 4)
