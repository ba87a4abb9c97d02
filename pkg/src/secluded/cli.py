"""Command-line entry point.  Every command prints one JSON document on stdout."""
from __future__ import annotations

import json
import random
import sys
from fractions import Fraction

import click

from .formats import (FormatError, domain_to_dict, parse_cnf, parse_dimacs, read_domain, serialize_clauses,
                      serialize_cnf)
from .harness import check_sandwich, check_shortest_is_secluded, random_point, random_simple_polygon
from .reduction import RegimeError, TreeParams, build_christmas_tree, verify_reduction
from .sat import (EmbeddedCnf2, SatError, is_monotone, max2sat_separable_vc, min2sat_monotone, min2sat_separable,
                  reduce_1in3_to_max2sat, reduce_max2sat_to_min2sat, reduce_max2sat_to_min2sat_embedded,
                  split_variable_gadget)
from .solvers import integral_exposure, integral_secluded_ptas, path_length, secluded_path_holes, shortest_path_simple
from .svg import render_svg
from .visibility import weak_visibility_area, weak_visibility_region
from .weights import build_weighted_subdivision


class _Fail(Exception):
    def __init__(self, kind, message, code=2):
        super().__init__(message)
        self.kind, self.code = kind, code


def _pt_json(p):
    return [_coord(p[0]), _coord(p[1])]


def _coord(c):
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else float(c)
    return c


def _path_json(path):
    return [_pt_json(p) for p in path]


def _emit(doc, ok=True):
    click.echo(json.dumps(doc, indent=2, sort_keys=False))
    if not ok:
        sys.exit(1)


def _load_domain(path, need_st=True):
    dom, s, t = read_domain(path)
    if need_st and (s is None or t is None):
        raise _Fail("missing-endpoints", "domain file needs 's' and 't' for this command")
    return dom, s, t


def _read_text(path):
    with open(path) as fh:
        return fh.read()


def _write_svg(out_svg, svg):
    if out_svg:
        with open(out_svg, "w") as fh:
            fh.write(svg)


def _provenance(**kw):
    return {k: v for k, v in kw.items()}


class _Group(click.Group):
    """Turns library errors into a JSON diagnostic and exit code 2."""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except FormatError as exc:
            self._fail(exc.kind, str(exc))
        except _Fail as exc:
            self._fail(exc.kind, str(exc), exc.code)
        except (SatError, RegimeError, OSError) as exc:
            self._fail(type(exc).__name__, str(exc))

    @staticmethod
    def _fail(kind, message, code=2):
        click.echo(json.dumps({"error": kind, "message": message}), err=True)
        sys.exit(code)


eps_opt = click.option("--eps", type=float, default=0.25, show_default=True, help="Approximation parameter.")
ref_opt = click.option("--refinement", type=int, default=4, show_default=True,
                       help="Sampling refinement for weak-visibility areas.")
seed_opt = click.option("--seed", type=int, default=0, show_default=True, help="Seed for randomized corpora.")
svg_opt = click.option("--out-svg", type=click.Path(dir_okay=False), default=None, help="Write an SVG rendering.")


@click.group(cls=_Group)
@click.version_option(package_name="secluded")
def main():
    """Minimum-exposure paths and planar optimal 2SAT."""


# ----------------------------------------------------------------- secluded

@main.group(cls=_Group)
def secluded():
    """Minimum 0/1-exposure paths."""


@secluded.command("simple")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@ref_opt
@svg_opt
def secluded_simple(domain_file, refinement, out_svg):
    """Shortest path in a simple polygon (the minimum-exposure path)."""
    dom, s, t = _load_domain(domain_file)
    if dom.holes:
        raise _Fail("has-holes", "use 'secluded holes' for domains with holes")
    path = shortest_path_simple(dom, s, t)
    area = weak_visibility_area(dom, path, refinement)
    _write_svg(out_svg, render_svg(dom, paths=[path], regions=[(weak_visibility_region(dom, path, refinement), "#8fb3ff")],
                                   points=[(s, "s"), (t, "t")]))
    _emit({"command": "secluded simple", "path": _path_json(path), "length": path_length(path), "seen_area": area,
           "provenance": _provenance(refinement=refinement, domain=domain_file)})


@secluded.command("holes")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-crossings", type=int, default=2, show_default=True, help="Fence crossings per hole.")
@ref_opt
@svg_opt
def secluded_holes(domain_file, max_crossings, refinement, out_svg):
    """Least-seen path over enumerated homotopy classes."""
    dom, s, t = _load_domain(domain_file)
    res = secluded_path_holes(dom, s, t, max_crossings=max_crossings, refinement=refinement)
    _write_svg(out_svg, render_svg(dom, paths=[res.path], points=[(s, "s"), (t, "t")]))
    _emit({
        "command": "secluded holes",
        "path": _path_json(res.path),
        "seen_area": res.area,
        "signature": [list(x) for x in res.signature.word],
        "candidates": [{"signature": [list(x) for x in sig.word], "length": ln, "seen_area": a}
                       for sig, ln, a in res.candidates],
        "provenance": _provenance(max_crossings=max_crossings, refinement=refinement, domain=domain_file),
    })


# ----------------------------------------------------------------- exposure

@main.group(cls=_Group)
def exposure():
    """Integral exposure."""


@exposure.command("ptas")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@eps_opt
@svg_opt
def exposure_ptas(domain_file, eps, out_svg):
    """Approximate minimum integral-exposure path."""
    dom, s, t = _load_domain(domain_file)
    res = integral_secluded_ptas(dom, s, t, eps)
    _write_svg(out_svg, render_svg(dom, paths=[res.path], points=[(s, "s"), (t, "t")]))
    _emit({"command": "exposure ptas", "path": _path_json(res.path), "integral_exposure": res.cost,
           "weighted_cost": res.weighted_cost, "stats": res.stats,
           "provenance": _provenance(eps=eps, domain=domain_file)})


@exposure.command("eval")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--path", "path_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON list of points; defaults to the Euclidean shortest path.")
@click.option("--samples-per-unit", type=float, default=8.0, show_default=True)
def exposure_eval(domain_file, path_file, samples_per_unit):
    """Integral exposure of a given path."""
    dom, s, t = _load_domain(domain_file, need_st=path_file is None)
    if path_file:
        raw = json.loads(_read_text(path_file))
        raw = raw["path"] if isinstance(raw, dict) else raw
        path = [(Fraction(str(x)), Fraction(str(y))) for x, y in raw]
        for p in path:
            if not dom.contains(p):
                raise _Fail("point-outside", "path vertex %s lies outside the domain" % (_pt_json(p),))
    else:
        path = shortest_path_simple(dom, s, t)
    _emit({"command": "exposure eval", "path": _path_json(path), "integral_exposure": integral_exposure(dom, path, samples_per_unit),
           "length": path_length(path), "provenance": _provenance(samples_per_unit=samples_per_unit, domain=domain_file)})


# ---------------------------------------------------------------------- sat

@main.group(cls=_Group)
def sat():
    """Planar optimal 2SAT solvers and reductions."""


def _assignment(bits):
    return [int(b) for b in bits]


@sat.command("solve-min")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
def sat_solve_min(cnf_file):
    """Exact min2SAT for separable (embedded) or monotone instances."""
    obj = parse_cnf(_read_text(cnf_file))
    if isinstance(obj, EmbeddedCnf2) and obj.is_separable():
        opt, a = min2sat_separable(obj)
        method = "separable"
    else:
        cnf = obj.cnf if isinstance(obj, EmbeddedCnf2) else obj
        if not is_monotone(cnf):
            raise _Fail("unsupported-instance", "instance is neither separable nor monotone")
        opt, a = min2sat_monotone(cnf)
        method = "monotone"
    _emit({"command": "sat solve-min", "method": method, "min_satisfied": opt, "assignment": _assignment(a),
           "provenance": _provenance(cnf=cnf_file)})


@sat.command("solve-max-sepvc")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
def sat_solve_max_sepvc(cnf_file):
    """Exact max2SAT for instances separable at clauses on a VC-cycle."""
    obj = parse_cnf(_read_text(cnf_file))
    if not isinstance(obj, EmbeddedCnf2) or obj.vc_cycle is None:
        raise _Fail("unsupported-instance", "needs a 'c vc-cycle' embedding")
    opt, a = max2sat_separable_vc(obj)
    _emit({"command": "sat solve-max-sepvc", "max_satisfied": opt, "assignment": _assignment(a),
           "provenance": _provenance(cnf=cnf_file)})


@sat.group("reduce", cls=_Group)
def sat_reduce():
    """Instance transformations; the reduced instance is printed as DIMACS text."""


@sat_reduce.command("kohli")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
def reduce_max_to_min(cnf_file):
    """max2SAT -> min2SAT with max = 2|C| - min."""
    obj = parse_cnf(_read_text(cnf_file))
    if isinstance(obj, EmbeddedCnf2) and obj.vc_cycle is not None:
        out = reduce_max2sat_to_min2sat_embedded(obj)
        m = len(obj.cnf)
    else:
        cnf = obj.cnf if isinstance(obj, EmbeddedCnf2) else obj
        out = reduce_max2sat_to_min2sat(cnf)
        m = len(cnf)
    _emit({"command": "sat reduce kohli", "relation": "max = %d - min" % (2 * m), "dimacs": serialize_cnf(out)})


@sat_reduce.command("one-in-three")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
def reduce_one_in_three(cnf_file):
    """1-in-3SAT (3-literal clauses) -> max2SAT."""
    n, clauses, _ = parse_dimacs(_read_text(cnf_file))
    for k, c in enumerate(clauses):
        if len(c) != 3:
            raise _Fail("clause-width", "clause %d has %d literals; expected 3" % (k + 1, len(c)))
    out = reduce_1in3_to_max2sat(n, clauses)
    _emit({"command": "sat reduce one-in-three", "target": 7 * len(clauses), "dimacs": serialize_clauses(out.num_vars, out.clauses)})


@sat_reduce.command("split")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--var", "var", type=int, required=True, help="Variable to split (1-based).")
@click.option("--copies", type=int, default=None, help="Tie-clause multiplicity; defaults to 2|C|+1.")
def reduce_split(cnf_file, var, copies):
    """Split a variable into three copies tied by heavy equivalence clauses."""
    obj = parse_cnf(_read_text(cnf_file))
    cnf = obj.cnf if isinstance(obj, EmbeddedCnf2) else obj
    N = copies if copies is not None else 2 * len(cnf) + 1
    out = split_variable_gadget(cnf, var, N)
    _emit({"command": "sat reduce split", "copies": N, "dimacs": serialize_cnf(out)})


# ---------------------------------------------------------------------- gen

@main.group(cls=_Group)
def gen():
    """Instance generators."""


def _tree_params(height, scale, grid, equalizers):
    return TreeParams(H=height, scale=scale, grid=grid, equalizers=equalizers)


tree_opts = [
    click.option("--height", type=float, default=TreeParams.H, show_default=True, help="Clause-line height."),
    click.option("--scale", type=float, default=TreeParams.scale, show_default=True),
    click.option("--grid", type=int, default=TreeParams.grid, show_default=True),
    click.option("--equalizers/--no-equalizers", default=True, show_default=True),
]


def _with(opts):
    def deco(f):
        for o in reversed(opts):
            f = o(f)
        return f
    return deco


@gen.command("christmas-tree")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
@_with(tree_opts)
@svg_opt
def gen_christmas_tree(cnf_file, height, scale, grid, equalizers, out_svg):
    """Hardness layout for a 2SAT instance, as a domain file with annotations."""
    obj = parse_cnf(_read_text(cnf_file))
    cnf = obj.cnf if isinstance(obj, EmbeddedCnf2) else obj
    lay = build_christmas_tree(cnf, _tree_params(height, scale, grid, equalizers))
    doc = domain_to_dict(lay.domain, lay.s, lay.t)
    doc["annotations"] = {
        "literal_point": {str(k): _pt_json(v) for k, v in sorted(lay.literal_point.items())},
        "literal_corridor": {str(k): [[_pt_json(a), _pt_json(b)] for a, b in v] for k, v in sorted(lay.literal_corridor.items())},
        "clause_gadget": {str(k + 1): [[float(x), float(y)] for x, y in v] for k, v in sorted(lay.clause_gadget.items())},
        "a": lay.a,
        "corridors": lay.corridor_count,
        "params": {"H": height, "scale": scale, "grid": grid, "equalizers": equalizers},
    }
    _write_svg(out_svg, render_svg(lay.domain, points=[(lay.s, "s"), (lay.t, "t")]))
    _emit(doc)


# ------------------------------------------------------------------- verify

@main.group(cls=_Group)
def verify():
    """Numerical checks; the exit code is 0 exactly when they pass."""


@verify.command("reduction")
@click.argument("cnf_file", type=click.Path(exists=True, dir_okay=False))
@_with(tree_opts)
@click.option("--refinement", type=int, default=2, show_default=True)
def verify_reduction_cmd(cnf_file, height, scale, grid, equalizers, refinement):
    """Seen area of canonical tree paths grows with satisfied clauses."""
    obj = parse_cnf(_read_text(cnf_file))
    cnf = obj.cnf if isinstance(obj, EmbeddedCnf2) else obj
    lay = build_christmas_tree(cnf, _tree_params(height, scale, grid, equalizers))
    rep = verify_reduction(lay, cnf, refinement)
    rep["spread_within_k"] = {str(k): v for k, v in rep["spread_within_k"].items()}
    rep["provenance"] = _provenance(refinement=refinement, H=height, scale=scale, grid=grid, equalizers=equalizers)
    _emit(rep, rep["ok"])


@verify.command("weights")
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@eps_opt
@seed_opt
@click.option("--points", type=int, default=100, show_default=True)
@svg_opt
def verify_weights(domain_file, eps, seed, points, out_svg):
    """Face weights stay within (1 +- 2 eps) of the visible area."""
    dom, _, _ = _load_domain(domain_file, need_st=False)
    rng = random.Random(seed)
    pts = [random_point(dom, rng) for _ in range(points)]
    rep = check_sandwich(dom, eps, pts)
    if out_svg:
        ws = build_weighted_subdivision(dom, eps)
        faces = [(ws.sub.face_polygon(f), ws.weights[f]) for f in range(ws.face_count())]
        _write_svg(out_svg, render_svg(dom, faces=faces))
    rep["ok"] = not rep["violations"]
    rep["provenance"] = _provenance(eps=eps, seed=seed, points=points, domain=domain_file)
    _emit(rep, rep["ok"])


@verify.command("theorem2")
@click.argument("domain_file", required=False, type=click.Path(exists=True, dir_okay=False))
@seed_opt
@ref_opt
@click.option("--polygons", type=int, default=3, show_default=True, help="Random polygons when no file is given.")
@click.option("--vertices", type=int, default=12, show_default=True)
@click.option("--alternatives", type=int, default=50, show_default=True)
def verify_shortest_least_seen(domain_file, seed, refinement, polygons, vertices, alternatives):
    """In simple polygons no alternative path sees (1%) less than the shortest."""
    rng = random.Random(seed)
    cases = []
    if domain_file:
        dom, s, t = _load_domain(domain_file, need_st=False)
        if dom.holes:
            raise _Fail("has-holes", "the check applies to simple polygons")
        cases.append((dom, s or random_point(dom, rng), t or random_point(dom, rng)))
    else:
        for _ in range(polygons):
            dom = random_simple_polygon(rng, vertices)
            cases.append((dom, random_point(dom, rng), random_point(dom, rng)))
    out = []
    ok = True
    for dom, s, t in cases:
        rep = check_shortest_is_secluded(dom, s, t, rng, alternatives, refinement)
        ok = ok and not rep["violations"]
        out.append({"domain": domain_to_dict(dom, s, t), "shortest_area": rep["shortest_area"],
                    "violations": rep["violations"]})
    _emit({"command": "verify theorem2", "cases": out, "ok": ok,
           "provenance": _provenance(seed=seed, refinement=refinement, alternatives=alternatives)}, ok)


# --------------------------------------------------------------------- plot

@main.command("plot", cls=click.Command)
@click.argument("domain_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--out-svg", type=click.Path(dir_okay=False), required=True)
@click.option("--weights", "with_weights", is_flag=True, help="Colour the weighted subdivision.")
@click.option("--path", "which", type=click.Choice(["none", "shortest", "ptas"]), default="shortest", show_default=True)
@eps_opt
def plot(domain_file, out_svg, with_weights, which, eps):
    """SVG of a domain with an optional path and weighted faces."""
    dom, s, t = _load_domain(domain_file, need_st=False)
    faces = None
    if with_weights:
        ws = build_weighted_subdivision(dom, eps)
        faces = [(ws.sub.face_polygon(f), ws.weights[f]) for f in range(ws.face_count())]
    paths = []
    if which != "none" and s is not None and t is not None:
        if which == "ptas":
            paths.append(integral_secluded_ptas(dom, s, t, eps).path)
        elif not dom.holes:
            paths.append(shortest_path_simple(dom, s, t))
    pts = [(p, lbl) for p, lbl in ((s, "s"), (t, "t")) if p is not None]
    _write_svg(out_svg, render_svg(dom, paths=paths, faces=faces, points=pts))
    _emit({"command": "plot", "out_svg": out_svg, "paths": len(paths), "faces": len(faces or []),
           "provenance": _provenance(eps=eps, domain=domain_file)})


if __name__ == "__main__":
    main()
