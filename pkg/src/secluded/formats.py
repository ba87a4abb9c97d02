"""Domain JSON and DIMACS (with embedding comment lines) readers and writers."""
from __future__ import annotations

import json
from fractions import Fraction

from .geometry import GeometryError, PolygonalDomain
from .sat import LEFT, RIGHT, Cnf2, EmbeddedCnf2, SatError


class FormatError(ValueError):
    """Malformed input.  ``kind`` names the failure for callers and the CLI."""

    def __init__(self, kind: str, message: str):
        super().__init__("%s: %s" % (kind, message))
        self.kind = kind


# ------------------------------------------------------------------ domains

def _int_point(v, where):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise FormatError("bad-point", "%s: expected [x, y]" % where)
    out = []
    for c in v:
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise FormatError("bad-point", "%s: coordinates must be numbers" % where)
        if isinstance(c, float):
            if not c.is_integer():
                raise FormatError("non-integer", "%s: coordinates must be integers" % where)
            c = int(c)
        out.append(c)
    return tuple(out)


def _any_point(v, where):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise FormatError("bad-point", "%s: expected [x, y]" % where)
    out = []
    for c in v:
        if isinstance(c, str):
            try:
                out.append(Fraction(c))
            except ValueError:
                raise FormatError("bad-point", "%s: cannot read %r" % (where, c)) from None
        elif isinstance(c, int) and not isinstance(c, bool):
            out.append(c)
        elif isinstance(c, float):
            out.append(Fraction(c))
        else:
            raise FormatError("bad-point", "%s: coordinates must be numbers" % where)
    return tuple(out)


def domain_from_dict(doc: dict):
    """Returns (domain, s, t); s and t are None when absent."""
    if not isinstance(doc, dict) or "outer" not in doc:
        raise FormatError("missing-outer", "document needs an 'outer' ring")
    outer = [_int_point(p, "outer[%d]" % i) for i, p in enumerate(doc["outer"])]
    holes_raw = doc.get("holes", [])
    if not isinstance(holes_raw, list):
        raise FormatError("bad-holes", "'holes' must be a list of rings")
    holes = [[_int_point(p, "holes[%d][%d]" % (k, i)) for i, p in enumerate(h)] for k, h in enumerate(holes_raw)]
    for name, ring in [("outer", outer)] + [("hole %d" % k, h) for k, h in enumerate(holes)]:
        if len(ring) < 3:
            raise FormatError("short-ring", "%s has fewer than three vertices" % name)
    try:
        dom = PolygonalDomain(outer, holes)
    except GeometryError as exc:
        msg = str(exc)
        kind = "hole-not-interior" if "not interior" in msg else "not-simple" if "not simple" in msg else "invalid-domain"
        if "touch" in msg or "nested" in msg:
            kind = "holes-overlap"
        raise FormatError(kind, msg) from None
    s = _any_point(doc["s"], "s") if doc.get("s") is not None else None
    t = _any_point(doc["t"], "t") if doc.get("t") is not None else None
    for name, p in (("s", s), ("t", t)):
        if p is not None and not dom.contains(p):
            raise FormatError("point-outside", "%s lies outside the domain" % name)
    return dom, s, t


def _num(c):
    c = Fraction(c)
    return int(c) if c.denominator == 1 else str(c)


def domain_to_dict(domain: PolygonalDomain, s=None, t=None) -> dict:
    doc = {
        "outer": [[_num(x), _num(y)] for x, y in domain.outer],
        "holes": [[[_num(x), _num(y)] for x, y in h] for h in domain.holes],
    }
    if s is not None:
        doc["s"] = [_num(s[0]), _num(s[1])]
    if t is not None:
        doc["t"] = [_num(t[0]), _num(t[1])]
    return doc


def parse_domain(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("malformed-json", str(exc)) from None
    return domain_from_dict(doc)


def serialize_domain(domain: PolygonalDomain, s=None, t=None) -> str:
    """Normalized text: outer counterclockwise, holes clockwise, one ring per line."""
    doc = domain_to_dict(domain, s, t)
    lines = ["{", '  "outer": %s,' % json.dumps(doc["outer"], separators=(",", ":"))]
    holes = ",\n    ".join(json.dumps(h, separators=(",", ":")) for h in doc["holes"])
    tail = [k for k in ("s", "t") if k in doc]
    lines.append('  "holes": [%s]%s' % (("\n    " + holes + "\n  ") if holes else "", "," if tail else ""))
    for i, k in enumerate(tail):
        lines.append('  "%s": %s%s' % (k, json.dumps(doc[k], separators=(",", ":")), "," if i + 1 < len(tail) else ""))
    lines.append("}")
    return "\n".join(lines) + "\n"


def read_domain(path: str):
    with open(path) as fh:
        return parse_domain(fh.read())


# -------------------------------------------------------------------- DIMACS

def parse_dimacs(text: str):
    """Returns (num_vars, clauses, extension) where extension holds the raw
    embedding lines: {'v-cycle': [...], 'side': {...}, 'vc-cycle': [...]}."""
    num_vars = num_clauses = None
    clauses, cur = [], []
    ext = {"v-cycle": None, "side": {}, "vc-cycle": None}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            toks = line.split()
            if len(toks) >= 2 and toks[0] == "c" and toks[1] in ("v-cycle", "side", "vc-cycle"):
                _read_extension(toks, ext, ln)
            continue
        if line.startswith("p"):
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise FormatError("bad-header", "line %d: expected 'p cnf <vars> <clauses>'" % ln)
            try:
                num_vars, num_clauses = int(toks[2]), int(toks[3])
            except ValueError:
                raise FormatError("bad-header", "line %d: counts must be integers" % ln) from None
            if num_vars < 0 or num_clauses < 0:
                raise FormatError("bad-header", "line %d: negative count" % ln)
            continue
        if num_vars is None:
            raise FormatError("missing-header", "line %d: clause before the 'p cnf' header" % ln)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise FormatError("bad-literal", "line %d: %r is not an integer" % (ln, tok)) from None
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                if abs(lit) > num_vars:
                    raise FormatError("literal-out-of-range", "line %d: literal %d exceeds %d variables" % (ln, lit, num_vars))
                cur.append(lit)
    if num_vars is None:
        raise FormatError("missing-header", "no 'p cnf' header")
    if cur:
        raise FormatError("unterminated-clause", "last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise FormatError("clause-count", "header announces %d clauses, found %d" % (num_clauses, len(clauses)))
    return num_vars, clauses, ext


def _read_extension(toks, ext, ln):
    kind = toks[1]
    try:
        if kind == "v-cycle":
            ext["v-cycle"] = [int(x) for x in toks[2:]]
        elif kind == "side":
            if len(toks) != 5 or toks[4] not in (LEFT, RIGHT):
                raise ValueError
            ext["side"][(int(toks[2]), int(toks[3]))] = toks[4]
        else:
            items = []
            for x in toks[2:]:
                if x[0] not in "vc":
                    raise ValueError
                items.append((x[0], int(x[1:])))
            ext["vc-cycle"] = items
    except (ValueError, IndexError):
        raise FormatError("bad-extension", "line %d: cannot read 'c %s' line" % (ln, kind)) from None


def cnf_from_dimacs(num_vars, clauses, ext):
    """Cnf2, or EmbeddedCnf2 when a v-cycle or vc-cycle is present."""
    for k, c in enumerate(clauses):
        if not 1 <= len(c) <= 2:
            raise FormatError("clause-width", "clause %d has %d literals; expected 1 or 2" % (k + 1, len(c)))
    cnf = Cnf2(num_vars, clauses)
    if ext["v-cycle"] is None and ext["vc-cycle"] is None:
        return cnf
    side = {}
    for (v, c), s in ext["side"].items():
        if not 1 <= c <= len(clauses) or not 1 <= v <= num_vars:
            raise FormatError("side-out-of-range", "side line for variable %d, clause %d" % (v, c))
        side[(v, c - 1)] = s
    vc = None
    if ext["vc-cycle"] is not None:
        vc = []
        for kind, i in ext["vc-cycle"]:
            if kind == "v" and not 1 <= i <= num_vars or kind == "c" and not 1 <= i <= len(clauses):
                raise FormatError("cycle-out-of-range", "vc-cycle entry %s%d" % (kind, i))
            vc.append((kind, i) if kind == "v" else (kind, i - 1))
    v_cycle = ext["v-cycle"]
    if v_cycle is None:
        v_cycle = [i for kind, i in vc if kind == "v"]
    try:
        return EmbeddedCnf2(cnf, tuple(v_cycle), side, tuple(vc) if vc is not None else None)
    except SatError as exc:
        raise FormatError("bad-embedding", str(exc)) from None


def parse_cnf(text: str):
    return cnf_from_dimacs(*parse_dimacs(text))


def serialize_cnf(obj) -> str:
    """DIMACS text for a Cnf2 or an EmbeddedCnf2 (with extension lines)."""
    emb = obj if isinstance(obj, EmbeddedCnf2) else None
    cnf = emb.cnf if emb else obj
    lines = ["p cnf %d %d" % (cnf.num_vars, len(cnf.clauses))]
    if emb:
        lines.append("c v-cycle " + " ".join(str(v) for v in emb.v_cycle))
        if emb.vc_cycle is not None:
            lines.append("c vc-cycle " + " ".join("v%d" % i if k == "v" else "c%d" % (i + 1) for k, i in emb.vc_cycle))
        for (v, c) in sorted(emb.side):
            lines.append("c side %d %d %s" % (v, c + 1, emb.side[(v, c)]))
    lines += [" ".join(str(l) for l in c) + " 0" for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def serialize_clauses(num_vars: int, clauses) -> str:
    """Plain DIMACS for clauses of any width."""
    lines = ["p cnf %d %d" % (num_vars, len(clauses))]
    lines += [" ".join(str(l) for l in c) + " 0" for c in clauses]
    return "\n".join(lines) + "\n"
