"""Optimal 2SAT on planar-embedded instances.

Literals are DIMACS-style signed integers (variable ``v`` is ``v`` or ``-v``,
1-based).  Assignments are tuples of booleans indexed from 0.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

import networkx as nx
import numpy as np
from networkx.algorithms import bipartite

LEFT, RIGHT = "L", "R"


class SatError(ValueError):
    pass


@dataclass(frozen=True)
class Cnf2:
    num_vars: int
    clauses: tuple

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for k, c in enumerate(self.clauses):
            if not 1 <= len(c) <= 2:
                raise SatError("clause %d has %d literals" % (k + 1, len(c)))
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise SatError("clause %d: literal %d out of range" % (k + 1, lit))

    def __len__(self):
        return len(self.clauses)


@dataclass(frozen=True)
class EmbeddedCnf2:
    cnf: Cnf2
    v_cycle: tuple
    side: dict  # (var, clause index) -> "L" | "R"
    vc_cycle: tuple | None = None  # entries ("v", var) or ("c", clause index)

    def __post_init__(self):
        n = self.cnf.num_vars
        if sorted(self.v_cycle) != list(range(1, n + 1)):
            raise SatError("v-cycle is not a permutation of the variables")
        for k, c in enumerate(self.cnf.clauses):
            for lit in c:
                if self.side.get((abs(lit), k)) not in (LEFT, RIGHT):
                    raise SatError("missing side for variable %d in clause %d" % (abs(lit), k + 1))
        if self.vc_cycle is not None:
            want = sorted([("v", v) for v in range(1, n + 1)] + [("c", k) for k in range(len(self.cnf))])
            if sorted(self.vc_cycle) != want:
                raise SatError("vc-cycle is not a permutation of variables and clauses")

    def variable_sides(self):
        """Per variable: (sides of positive occurrences, sides of negative ones)."""
        out = {v: (set(), set()) for v in range(1, self.cnf.num_vars + 1)}
        for k, c in enumerate(self.cnf.clauses):
            for lit in c:
                out[abs(lit)][0 if lit > 0 else 1].add(self.side[(abs(lit), k)])
        return out

    def is_variable_separable(self) -> bool:
        for pos, neg in self.variable_sides().values():
            if len(pos) > 1 or len(neg) > 1 or (pos and neg and pos == neg):
                return False
        return True

    def clause_sides(self):
        """Side of every clause, or None when its occurrences disagree."""
        out = []
        for k, c in enumerate(self.cnf.clauses):
            s = {self.side[(abs(lit), k)] for lit in c}
            out.append(s.pop() if len(s) == 1 else None)
        return out

    def is_separable(self) -> bool:
        return self.is_variable_separable() and all(s is not None for s in self.clause_sides())

    def separates_at_clauses(self) -> bool:
        """Every clause gets its two connections from different sides."""
        for k, c in enumerate(self.cnf.clauses):
            if len(c) != 2 or abs(c[0]) == abs(c[1]) or self.side[(abs(c[0]), k)] == self.side[(abs(c[1]), k)]:
                return False
        return True


# -------------------------------------------------------------- evaluation

def _lit_true(lit: int, a) -> bool:
    v = a[abs(lit) - 1]
    return v if lit > 0 else not v


def satisfied_count(cnf: Cnf2, a) -> int:
    if len(a) != cnf.num_vars:
        raise SatError("assignment length differs from the variable count")
    return sum(1 for c in cnf.clauses if any(_lit_true(l, a) for l in c))


def _counts_block(clauses, n, lo, hi):
    idx = np.arange(lo, hi, dtype=np.int64)
    total = np.zeros(hi - lo, dtype=np.int32)
    bits = {}
    for c in clauses:
        sat = np.zeros(hi - lo, dtype=bool)
        for lit in c:
            v = abs(lit)
            if v not in bits:
                bits[v] = ((idx >> (n - v)) & 1).astype(bool)
            sat |= bits[v] if lit > 0 else ~bits[v]
        total += sat
    return total


def brute_force_opt(cnf: Cnf2, objective: str = "min"):
    """Exhaustive optimum; the lexicographically smallest optimal assignment
    (False < True, variable 1 first)."""
    if objective not in ("min", "max"):
        raise SatError("objective must be 'min' or 'max'")
    n = cnf.num_vars
    if n > 25:
        raise SatError("brute force limited to 25 variables")
    if not cnf.clauses:
        return 0, tuple([False] * n)
    best, best_a = None, None
    block = 1 << 20
    for lo in range(0, 1 << n, block):
        hi = min(1 << n, lo + block)
        tot = _counts_block(cnf.clauses, n, lo, hi)
        k = int(np.argmin(tot) if objective == "min" else np.argmax(tot))
        val = int(tot[k])
        if best is None or (val < best if objective == "min" else val > best):
            best, best_a = val, lo + k
    a = tuple(bool((best_a >> (n - v)) & 1) for v in range(1, n + 1))
    return best, a


# --------------------------------------------------------- conflict graph

@dataclass
class ConflictGraph:
    vertices: list
    edges: set = field(default_factory=set)  # frozenset({i, j})

    def adjacency(self):
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            i, j = tuple(e)
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def is_bipartite(self) -> bool:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return nx.is_bipartite(g)


def clause_conflict_graph(cnf: Cnf2) -> ConflictGraph:
    """Clauses joined whenever one holds the negation of a literal of the other."""
    by_lit = {}
    for k, c in enumerate(cnf.clauses):
        for lit in set(c):
            by_lit.setdefault(lit, []).append(k)
    edges = set()
    for lit, ks in by_lit.items():
        if lit < 0:
            continue
        for i in ks:
            for j in by_lit.get(-lit, ()):
                if i != j:
                    edges.add(frozenset((i, j)))
    return ConflictGraph(list(range(len(cnf.clauses))), edges)


def _min_vertex_cover(h: ConflictGraph, part_a) -> set:
    g = nx.Graph()
    g.add_nodes_from(h.vertices)
    g.add_edges_from(tuple(e) for e in h.edges)
    a_nodes = [v for v in h.vertices if v in part_a]
    if not h.edges:
        return set()
    matching = bipartite.hopcroft_karp_matching(g, top_nodes=a_nodes)
    return set(bipartite.to_vertex_cover(g, matching, top_nodes=a_nodes))


def _solve_bipartite(cnf: Cnf2, part_a):
    h = clause_conflict_graph(cnf)
    for e in h.edges:
        i, j = tuple(e)
        if (i in part_a) == (j in part_a):
            raise RuntimeError("conflict graph edge inside one side: not bipartite")
    cover = _min_vertex_cover(h, part_a)
    # falsify every clause outside the cover; they are pairwise consistent
    a = [False] * cnf.num_vars
    for k, c in enumerate(cnf.clauses):
        if k in cover:
            continue
        for lit in c:
            a[abs(lit) - 1] = lit < 0
    a = tuple(a)
    val = satisfied_count(cnf, a)
    if val != len(cover):
        raise RuntimeError("witness does not realise the vertex cover size")
    return val, a


def min2sat_separable(e: EmbeddedCnf2):
    """Minimum number of satisfied clauses of a separable instance (minimum
    vertex cover of the bipartite clause conflict graph)."""
    if not e.is_separable():
        raise SatError("instance is not separable")
    sides = e.clause_sides()
    part_a = {k for k, s in enumerate(sides) if s == LEFT}
    return _solve_bipartite(e.cnf, part_a)


def is_monotone(cnf: Cnf2) -> bool:
    return all(all(l > 0 for l in c) or all(l < 0 for l in c) for c in cnf.clauses)


def min2sat_monotone(cnf: Cnf2):
    if not is_monotone(cnf):
        raise SatError("instance is not monotone")
    part_a = {k for k, c in enumerate(cnf.clauses) if c[0] > 0}
    return _solve_bipartite(cnf, part_a)


# -------------------------------------------------------------- reductions

def reduce_max2sat_to_min2sat(cnf: Cnf2) -> Cnf2:
    """Each clause x v y becomes (-x v w), (-y v -w) with a fresh w, so that
    max(original) = 2|C| - min(reduced)."""
    n = cnf.num_vars
    out = []
    for k, c in enumerate(cnf.clauses):
        x, y = (c[0], c[0]) if len(c) == 1 else c
        w = n + k + 1
        out.append((-x, w))
        out.append((-y, -w))
    return Cnf2(n + len(cnf.clauses), out)


def reduce_max2sat_to_min2sat_embedded(e: EmbeddedCnf2) -> EmbeddedCnf2:
    """Same reduction carrying the embedding: the clause nodes of the VC cycle
    become the fresh variables of the V-cycle, each new clause sits on the side
    its original connection arrived from."""
    red = reduce_max2sat_to_min2sat(e.cnf)
    n = e.cnf.num_vars
    side = {}
    for k, c in enumerate(e.cnf.clauses):
        x, y = (c[0], c[0]) if len(c) == 1 else c
        w = n + k + 1
        sx = e.side[(abs(x), k)]
        sy = e.side[(abs(y), k)]
        side[(abs(x), 2 * k)] = sx
        side[(w, 2 * k)] = sx
        side[(abs(y), 2 * k + 1)] = sy
        side[(w, 2 * k + 1)] = sy
    if e.vc_cycle is not None:
        cyc = tuple(v if kind == "v" else n + v + 1 for kind, v in e.vc_cycle)
    else:
        cyc = tuple(e.v_cycle) + tuple(range(n + 1, n + len(e.cnf) + 1))
    return EmbeddedCnf2(red, cyc, side)


def max2sat_separable_vc(e: EmbeddedCnf2):
    """Maximum number of satisfied clauses of a separable instance whose VC
    cycle also separates the two variables at every clause."""
    if e.vc_cycle is None:
        raise SatError("a VC cycle is required")
    if not e.is_variable_separable():
        raise SatError("instance is not separable")
    if not e.separates_at_clauses():
        raise SatError("the cycle does not separate the variables at every clause")
    red = reduce_max2sat_to_min2sat_embedded(e)
    m, a = min2sat_separable(red)
    a = a[: e.cnf.num_vars]
    val = 2 * len(e.cnf) - m
    if satisfied_count(e.cnf, a) != val:
        raise RuntimeError("witness does not realise the optimum")
    return val, a


NINE_CLAUSES = "-a -b -c -a|-b -b|-c -a|-c a|b b|c a|c"


def reduce_1in3_to_max2sat(num_vars: int, clauses3) -> Cnf2:
    """Each a v b v c becomes -a, -b, -c, -a v -b, -b v -c, -a v -c,
    a v b, b v c, a v c."""
    out = []
    for c in clauses3:
        if len(c) != 3:
            raise SatError("1-in-3 clauses need exactly three literals")
        a, b, cc = c
        out += [(-a,), (-b,), (-cc,), (-a, -b), (-b, -cc), (-a, -cc), (a, b), (b, cc), (a, cc)]
    return Cnf2(num_vars, out)


def one_in_three_satisfiable(num_vars: int, clauses3) -> bool:
    for bits in range(1 << num_vars):
        a = [bool((bits >> (num_vars - v)) & 1) for v in range(1, num_vars + 1)]
        if all(sum(_lit_true(l, a) for l in c) == 1 for c in clauses3):
            return True
    return False


def split_variable_gadget(cnf: Cnf2, y: int, N: int, monotonize: bool = True) -> Cnf2:
    """Split y into y, z, t tied by N copies each of (y v z), (-y v -z),
    (z v t), (-z v -t); with ``monotonize`` every mixed clause x v -y becomes
    x v z."""
    if not 1 <= y <= cnf.num_vars:
        raise SatError("variable out of range")
    if N < 2 * len(cnf) + 1:
        raise SatError("N must be at least 2|C| + 1")
    return _split(cnf, y, N, monotonize)


def _split(cnf, y, N, monotonize=True):
    z, t = cnf.num_vars + 1, cnf.num_vars + 2
    out = []
    for c in cnf.clauses:
        if monotonize and -y in c and any(l > 0 for l in c if l != -y):
            c = tuple(z if l == -y else l for l in c)
        out.append(c)
    for _ in range(N):
        out += [(y, z), (-y, -z), (z, t), (-z, -t)]
    return Cnf2(cnf.num_vars + 2, out)


# ------------------------------------------------------------ generators

def random_cnf2(rng: random.Random, n: int, m: int) -> Cnf2:
    cl = []
    for _ in range(m):
        k = rng.choice((1, 2, 2, 2))
        cl.append(tuple(rng.choice((1, -1)) * rng.randint(1, n) for _ in range(k)))
    return Cnf2(n, cl)


def random_monotone(rng: random.Random, n: int, m: int) -> Cnf2:
    cl = []
    for _ in range(m):
        sg = rng.choice((1, -1))
        k = rng.choice((1, 2, 2, 2))
        cl.append(tuple(sg * rng.randint(1, n) for _ in range(k)))
    return Cnf2(n, cl)


def random_separable(rng: random.Random, n: int, m: int) -> EmbeddedCnf2:
    pos_side = {v: rng.choice((LEFT, RIGHT)) for v in range(1, n + 1)}
    cl, side = [], {}
    for k in range(m):
        s = rng.choice((LEFT, RIGHT))
        vs = [rng.randint(1, n) for _ in range(rng.choice((1, 2, 2, 2)))]
        c = tuple(v if pos_side[v] == s else -v for v in vs)
        cl.append(c)
        for v in vs:
            side[(v, k)] = s
    cyc = list(range(1, n + 1))
    rng.shuffle(cyc)
    return EmbeddedCnf2(Cnf2(n, cl), tuple(cyc), side)


def random_separable_vc(rng: random.Random, n: int, m: int) -> EmbeddedCnf2:
    """Separable max2SAT whose cycle separates the two connections of every clause."""
    pos_side = {v: rng.choice((LEFT, RIGHT)) for v in range(1, n + 1)}
    cl, side = [], {}
    for k in range(m):
        if n < 2:
            break
        v1, v2 = rng.sample(range(1, n + 1), 2)
        s1 = rng.choice((LEFT, RIGHT))
        s2 = RIGHT if s1 == LEFT else LEFT
        l1 = v1 if pos_side[v1] == s1 else -v1
        l2 = v2 if pos_side[v2] == s2 else -v2
        side[(v1, len(cl))] = s1
        side[(v2, len(cl))] = s2
        cl.append((l1, l2))
    items = [("v", v) for v in range(1, n + 1)] + [("c", k) for k in range(len(cl))]
    rng.shuffle(items)
    vc = tuple(items)
    v_cycle = tuple(v for kind, v in vc if kind == "v")
    return EmbeddedCnf2(Cnf2(n, cl), v_cycle, side, vc)
