"""Scenario files: parsing, validation and execution.

A scenario is a JSON object::

    {
      "version": 1,
      "arithmetic": "rational",
      "seed": 7,
      "operation": "gmp-minimal",
      "inputs": {"X": {"dim": 2, "vertices": [["0", "0"], ["1", "0"], ["1/2", "1"]]}, ...},
      "output": {"report": "fig1.json", "svg": "fig1.svg"}
    }

Scalars are JSON numbers or ``"p/q"`` strings.  Within one polytope,
vector or function all scalars must use the same form.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, gmp, suites
from .epsilon import (PWLConvexFunction, eps_subdiff, eps_subdiff_oracle, evaluate,
                      graph_convexity_check, lipschitz_probe)
from .geometry import (EMPTY, Polytope, contains_set, direction_grid, hausdorff, hull,
                       intersect, minkowski_sum, norm, norm_sq, scale, support, support_value)
from .setdiff import compare_intersection_forms, cover_diff, erode_diff

__all__ = ["SCHEMA_VERSION", "OPERATIONS", "Scenario", "ScenarioError", "ChecksFailed",
           "load", "parse", "validate", "execute", "encode"]

SCHEMA_VERSION = 1


class ScenarioError(ValueError):
    """Schema or semantic problems; ``diagnostics`` lists one message per problem."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class ChecksFailed(RuntimeError):
    pass


# input kinds: polytope, function, scalar, nonneg (scalar >= 0), nonnegs (one or a list),
# unit (scalar in [0, 1]), vector, vectors, int (positive)
_P = "polytope"
OPERATIONS = {
    "hull": {"points": ("vectors", True)},
    "support": {"X": (_P, True), "p": ("vector", True)},
    "minkowski-sum": {"X": (_P, True), "Y": (_P, True)},
    "scale": {"X": (_P, True), "alpha": ("scalar", True)},
    "intersect": {"X": (_P, True), "Y": (_P, True)},
    "hausdorff": {"X": (_P, True), "Y": (_P, True)},
    "norm": {"X": (_P, True)},
    "cover-diff": {"X": (_P, True), "Y": (_P, True)},
    "erode-diff": {"X": (_P, True), "Y": (_P, True)},
    "compare-forms": {"X": (_P, True), "Y": (_P, True)},
    "gmp-support": {"X": (_P, True), "Y": (_P, True), "p": ("vector", True)},
    "gmp-minimal": {"X": (_P, True), "Y": (_P, True), "selectors": ("vectors", False),
                    "k": ("int", False), "m": ("int", False)},
    "gmp-oracle": {"X": (_P, True), "Y": (_P, True), "m": ("int", False),
                   "ladder": ("int", False), "budget": ("int", False)},
    "gmp-norm": {"X": (_P, True), "Y": (_P, True), "k": ("int", False), "m": ("int", False)},
    "gmp-equivalent": {"X": (_P, True), "Y": (_P, True), "Z": (_P, True), "W": (_P, True)},
    "eps-subdiff": {"f": ("function", True), "x": ("vector", True), "eps": ("nonnegs", True)},
    "lipschitz-probe": {"f": ("function", True), "x": ("vector", True), "eps": ("nonneg", True),
                        "upsilon": ("nonneg", True), "n": ("int", False)},
    "graph-convexity": {"f": ("function", False), "x": ("vector", False),
                        "eps1": ("nonneg", False), "eps2": ("nonneg", False),
                        "t": ("unit", False), "probes": ("int", False)},
    "lemma-suite": {"instances": ("int", False)},
    "mp-properties": {"instances": ("int", False)},
    "origin-explore": {"instances": ("int", False), "selectors": ("int", False)},
}


@dataclass
class Scenario:
    version: int
    arithmetic: str
    seed: int
    operation: str
    inputs: dict
    output: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict, repr=False)


def load(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError([f"line {exc.lineno} column {exc.colno}: {exc.msg}"]) from None
    except OSError as exc:
        raise ScenarioError([f"{path}: {exc.strerror}"]) from None


def _is_num(v):
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def _scalar_form(v, where, errs):
    """Return ``"number"`` or ``"string"`` for a valid scalar, else record an error."""
    if _is_num(v):
        if isinstance(v, float) and (v != v or v in (float("inf"), float("-inf"))):
            errs.append(f"{where}: scalars must be finite")
            return None
        return "number"
    if isinstance(v, str):
        try:
            Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            errs.append(f"{where}: {v!r} is not a rational 'p/q' string")
            return None
        return "string"
    errs.append(f"{where}: expected a number or 'p/q' string, got {type(v).__name__}")
    return None


def _check_forms(items, where, errs):
    forms = {f for f in (_scalar_form(v, w, errs) for v, w in items) if f}
    if len(forms) > 1:
        errs.append(f"{where}: mixes JSON numbers and 'p/q' strings")


def _check_vector(v, where, errs, dim=None):
    if not isinstance(v, list) or not v:
        errs.append(f"{where}: expected a nonempty list of scalars")
        return None
    if dim is not None and len(v) != dim:
        errs.append(f"{where}: expected {dim} coordinates, got {len(v)}")
    return len(v)


def _check_polytope(v, where, errs):
    if not isinstance(v, dict):
        errs.append(f"{where}: expected an object with 'dim' and 'vertices'")
        return None
    extra = set(v) - {"dim", "vertices"}
    if extra:
        errs.append(f"{where}: unknown keys {sorted(extra)}")
    d = v.get("dim")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        errs.append(f"{where}.dim: expected a positive integer")
        d = None
    verts = v.get("vertices")
    if not isinstance(verts, list) or not verts:
        errs.append(f"{where}.vertices: expected a nonempty list")
        return d
    items = []
    for i, p in enumerate(verts):
        w = f"{where}.vertices[{i}]"
        if _check_vector(p, w, errs, d) is not None:
            items += [(c, f"{w}[{j}]") for j, c in enumerate(p)]
    _check_forms(items, where, errs)
    return d


def _check_function(v, where, errs):
    if not isinstance(v, dict) or not isinstance(v.get("pieces"), list) or not v["pieces"]:
        errs.append(f"{where}: expected an object with a nonempty 'pieces' list")
        return None
    dim = None
    items = []
    for i, piece in enumerate(v["pieces"]):
        w = f"{where}.pieces[{i}]"
        if not isinstance(piece, dict) or set(piece) != {"gradient", "offset"}:
            errs.append(f"{w}: expected an object with 'gradient' and 'offset'")
            continue
        d = _check_vector(piece["gradient"], f"{w}.gradient", errs, dim)
        dim = dim or d
        if d is not None:
            items += [(c, f"{w}.gradient[{j}]") for j, c in enumerate(piece["gradient"])]
        items.append((piece["offset"], f"{w}.offset"))
    _check_forms(items, where, errs)
    return dim


def _check_input(kind, v, where, errs):
    if kind == "polytope":
        return _check_polytope(v, where, errs)
    if kind == "function":
        return _check_function(v, where, errs)
    if kind == "vector":
        d = _check_vector(v, where, errs)
        if d:
            _check_forms([(c, f"{where}[{j}]") for j, c in enumerate(v)], where, errs)
        return d
    if kind == "vectors":
        if not isinstance(v, list) or not v:
            errs.append(f"{where}: expected a nonempty list of vectors")
            return None
        dims = set()
        for i, p in enumerate(v):
            d = _check_vector(p, f"{where}[{i}]", errs)
            if d:
                dims.add(d)
                _check_forms([(c, f"{where}[{i}][{j}]") for j, c in enumerate(p)],
                             f"{where}[{i}]", errs)
        if len(dims) > 1:
            errs.append(f"{where}: vectors of mixed dimension")
        return dims.pop() if len(dims) == 1 else None
    if kind == "int":
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            errs.append(f"{where}: expected a positive integer")
        return None
    values = v if kind == "nonnegs" and isinstance(v, list) else [v]
    if kind == "nonnegs" and not values:
        errs.append(f"{where}: expected a scalar or a nonempty list of scalars")
    for i, s in enumerate(values):
        w = where if values is not v else f"{where}[{i}]"
        if _scalar_form(s, w, errs) is None:
            continue
        q = Fraction(s.strip()) if isinstance(s, str) else Fraction(s)
        if kind in ("nonneg", "nonnegs", "unit") and q < 0:
            errs.append(f"{w}: must be nonnegative, got {s}")
        if kind == "unit" and q > 1:
            errs.append(f"{w}: must lie in [0, 1], got {s}")
    return None


def validate(doc) -> list:
    """Schema and semantic diagnostics for a scenario document; empty when valid."""
    errs = []
    if not isinstance(doc, dict):
        return ["<root>: expected a JSON object"]
    known = {"version", "arithmetic", "seed", "operation", "inputs", "output", "description"}
    for k in sorted(set(doc) - known):
        errs.append(f"{k}: unknown top-level key")
    if doc.get("version") != SCHEMA_VERSION:
        errs.append(f"version: expected {SCHEMA_VERSION}, got {doc.get('version')!r}")
    if doc.get("arithmetic", "rational") not in arith.MODES:
        errs.append(f"arithmetic: expected one of {list(arith.MODES)}")
    seed = doc.get("seed")
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        errs.append("seed: required, an unsigned integer")
    op = doc.get("operation")
    if op not in OPERATIONS:
        errs.append(f"operation: unknown operation {op!r}")
        return errs
    inputs = doc.get("inputs", {})
    if not isinstance(inputs, dict):
        errs.append("inputs: expected an object")
        return errs
    spec = OPERATIONS[op]
    for k in sorted(set(inputs) - set(spec)):
        errs.append(f"inputs.{k}: not an input of {op}")
    dims = {}
    for name, (kind, required) in spec.items():
        if name not in inputs:
            if required:
                errs.append(f"inputs.{name}: missing required {kind} input")
            continue
        d = _check_input(kind, inputs[name], f"inputs.{name}", errs)
        if d:
            dims[name] = d
    if len(set(dims.values())) > 1:
        listing = ", ".join(f"{k}={v}" for k, v in sorted(dims.items()))
        errs.append(f"inputs: dimension mismatch ({listing})")
    if op == "lipschitz-probe" and not errs:
        e, u = (Fraction(str(inputs[k])) for k in ("eps", "upsilon"))
        if not 0 < u < e:
            errs.append("inputs.upsilon: need 0 < upsilon < eps")
    if op == "graph-convexity" and ("f" in inputs) != ("x" in inputs):
        errs.append("inputs: graph-convexity needs both f and x, or neither")
    m = inputs.get("m", 64)
    if op in ("gmp-minimal", "gmp-norm") and isinstance(m, int) and m < 8:
        errs.append("inputs.m: the extraction grid needs m >= 8")
    out = doc.get("output", {})
    if not isinstance(out, dict) or set(out) - {"report", "svg"} or not all(
            isinstance(v, str) and v for v in out.values()):
        errs.append("output: expected an object with optional string paths 'report' and 'svg'")
    return errs


def parse(doc, arithmetic: str | None = None, seed: int | None = None) -> Scenario:
    errs = validate(doc)
    if errs:
        raise ScenarioError(errs)
    return Scenario(doc["version"], arithmetic or doc.get("arithmetic", "rational"),
                    doc["seed"] if seed is None else seed, doc["operation"],
                    doc.get("inputs", {}), doc.get("output", {}), doc)


# -- conversion of validated inputs (inside the chosen arithmetic mode) --

def _polytope(v):
    return Polytope(v["vertices"])


def _function(v):
    return PWLConvexFunction([(p["gradient"], p["offset"]) for p in v["pieces"]])


def _convert(kind, v):
    if kind == "polytope":
        return _polytope(v)
    if kind == "function":
        return _function(v)
    if kind == "vector":
        return arith.to_vector(v)
    if kind == "vectors":
        return [arith.to_vector(p) for p in v]
    if kind == "int":
        return v
    if kind == "nonnegs":
        return [arith.to_scalar(s) for s in v] if isinstance(v, list) else [arith.to_scalar(v)]
    return arith.to_scalar(v)


def encode(obj):
    """JSON-ready form of library values."""
    if obj is EMPTY:
        return None
    if arith.is_rational(obj):
        return str(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, dict):
        return {k: encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [encode(v) for v in items]
    return float(obj)


def _check(name, passed, **measured):
    return {"name": name, "passed": bool(passed), **{k: encode(v) for k, v in measured.items()}}


def execute(sc: Scenario, pool_map=map):
    """Run a parsed scenario in the current arithmetic mode.

    Returns ``(results, checks, figures)``; ``figures`` lists what to draw.
    ``pool_map`` lets independent extractions run in parallel.
    """
    spec = OPERATIONS[sc.operation]
    inp = {k: _convert(spec[k][0], v) for k, v in sc.inputs.items()}
    handler = _HANDLERS[sc.operation]
    return handler(inp, sc, pool_map)


def _set_op(fn, label):
    def run(inp, sc, pool_map):
        value = fn(inp)
        return {label: encode(value)}, [], _figures(inp, value)
    return run


def _figures(inp, *values):
    out = [(v, k) for k, v in inp.items() if isinstance(v, Polytope) and v.dim == 2]
    out += [(v, f"result{i}") for i, v in enumerate(values)
            if isinstance(v, Polytope) and v.dim == 2]
    return out


def _support(inp, sc, pool_map):
    value, face = support(inp["X"], inp["p"])
    return {"value": encode(value), "face": encode(face)}, [], []


def _hausdorff(inp, sc, pool_map):
    return {"distance": hausdorff(inp["X"], inp["Y"])}, [], _figures(inp)


def _norm(inp, sc, pool_map):
    return {"norm": norm(inp["X"])}, [], _figures(inp)


def _compare(inp, sc, pool_map):
    res = compare_intersection_forms(inp["X"], inp["Y"])
    return encode(res), [], _figures(inp, res["cover_diff"], res["reflected"])


def _gmp_support(inp, sc, pool_map):
    return {"value": encode(gmp.support(gmp.make(inp["X"], inp["Y"]), inp["p"]))}, [], []


def _extract(args):
    mode, X, Y, p, m = args
    with arith.arithmetic(mode):
        return gmp.minimal_element(gmp.make(X, Y), p, m)


def _at_least(a, b, rep):
    # reports from the floating point LP path carry their own tolerance
    if rep.exact_minimal is None:
        return float(a) - float(b) >= -float(rep.tolerance)
    return arith.sign(a - b) >= 0


def _gmp_minimal(inp, sc, pool_map):
    X, Y = inp["X"], inp["Y"]
    m = inp.get("m", 64)
    sels = inp.get("selectors") or direction_grid(inp.get("k", 8), X.dim)
    reports = list(pool_map(_extract, [(arith.get_mode(), X, Y, p, m) for p in sels]))
    distinct = []
    for rep in reports:
        if not any(gmp.is_equivalent(gmp.make(rep.element), gmp.make(Z)) for Z in distinct):
            distinct.append(rep.element)
    C = gmp.make(X, Y)
    checks = [
        _check("feasible", all(r.certified_feasible for r in reports)),
        _check("exact-minimal-certificate",
               all(r.exact_minimal is not False for r in reports)),
        _check("selector-gap-nonnegative",
               all(_at_least(r.gap, 0, r) for r in reports),
               max_gap=max((r.gap for r in reports), key=float)),
        _check("support-lower-bound-on-grid",
               all(_at_least(support_value(r.element, q), gmp.support(C, q), r)
                   for r in reports for q in direction_grid(16, X.dim))),
    ]
    results = {"reports": [r.to_json() for r in reports],
               "distinct_elements": len(distinct),
               "segments": sum(len(r.element.vertices) == 2 for r in reports),
               "support_inf": [encode(gmp.support(C, p)) for p in sels]}
    figs = [(X, "X"), (Y, "Y")] + [(r, f"Z{i}") for i, r in enumerate(reports)]
    return results, checks, figs if X.dim == 2 else []


def _gmp_oracle(inp, sc, pool_map):
    X, Y = inp["X"], inp["Y"]
    cands = gmp.minimal_oracle(gmp.make(X, Y), inp.get("m", 8), inp.get("ladder", 6),
                               inp.get("budget", 200_000))
    Z0 = minkowski_sum(X, scale(Y, -1))
    checks = [_check("feasible", all(gmp.feasible(Z, gmp.make(X, Y)) for Z in cands)),
              _check("inside-X-minus-Y", all(contains_set(Z, Z0) for Z in cands))]
    return ({"candidates": [Z.to_json() for Z in cands], "count": len(cands)}, checks,
            [(X, "X"), (Y, "Y")] + [(Z, f"C{i}") for i, Z in enumerate(cands)])


def _gmp_norm(inp, sc, pool_map):
    X, Y = inp["X"], inp["Y"]
    b = gmp.collection_norm(gmp.make(X, Y), inp.get("k", 8), inp.get("m", 64))
    checks = [_check("lower<=upper", b.lower_sq <= b.upper_sq),
              _check("upper<=|X|+|Y|", arith.sqrt_le_sum(b.upper_sq, norm_sq(X), norm_sq(Y)))]
    return {"lower": b.lower, "upper": b.upper, "lower_sq": encode(b.lower_sq),
            "upper_sq": encode(b.upper_sq)}, checks, []


def _gmp_equivalent(inp, sc, pool_map):
    eq = gmp.is_equivalent(gmp.make(inp["X"], inp["Y"]), gmp.make(inp["Z"], inp["W"]))
    return {"equivalent": eq}, [], []


def _eps(inp, sc, pool_map):
    f, x = inp["f"], inp["x"]
    rows, checks = [], []
    value, active = evaluate(f, x)
    prev = None
    for e in inp["eps"]:
        D = eps_subdiff(f, x, e)
        rows.append({"eps": encode(e), "set": D.to_json()})
        checks.append(_check(f"oracle-vertices@{encode(e)}",
                             all(eps_subdiff_oracle(f, x, e, v) for v in D.vertices)))
        if prev is not None and prev[0] <= e:
            checks.append(_check(f"nested@{encode(prev[0])}<={encode(e)}",
                                 contains_set(prev[1], D)))
        prev = (e, D)
    return {"value": encode(value), "active": sorted(active), "subdifferentials": rows}, checks, []


def _lipschitz(inp, sc, pool_map):
    rep = lipschitz_probe(inp["f"], inp["x"], inp["eps"], inp["upsilon"], inp.get("n", 200),
                          seed=sc.seed)
    checks = [_check("no-violations", rep.violations == 0, violations=rep.violations),
              _check("L_emp<=L_bound", rep.L_emp <= rep.L_bound)]
    return {"L_emp": rep.L_emp, "L_bound": rep.L_bound, "violations": rep.violations,
            "pairs": rep.pairs}, checks, []


def _graph(inp, sc, pool_map):
    if "f" in inp:
        r = random.Random(sc.seed)
        probes = inp.get("probes", 1)
        fails = 0
        for _ in range(probes):
            e1 = inp.get("eps1", arith.to_scalar(f"{r.randint(0, 16)}/4"))
            e2 = inp.get("eps2", arith.to_scalar(f"{r.randint(0, 16)}/4"))
            t = inp.get("t", arith.to_scalar(f"{r.randint(0, 8)}/8"))
            fails += not graph_convexity_check(inp["f"], inp["x"], e1, e2, t)
        res = {"name": "graph-convexity", "passed": fails == 0, "instances": probes,
               "failures": fails}
    else:
        res = suites.graph_convexity_sweep(sc.seed, inp.get("probes", 500))
    return res, [_check("graph-convexity", res["passed"], failures=res["failures"])], []


def _lemma_suite(inp, sc, pool_map):
    res = suites.lemma_suite(sc.seed, inp.get("instances", 100))
    return res, [_check(p["name"], p["passed"], failures=p["failures"]) for p in res["lemmas"]], []


def _mp(inp, sc, pool_map):
    res = suites.mp_properties(sc.seed, inp.get("instances", 100))
    checks = [_check("covering", res["covering"]["passed"]),
              _check("erosion", res["erosion"]["passed"]),
              _check("sign-discrepancy-witness", res["sign_discrepancy"]["witness"] is not None)]
    return res, checks, []


def _explore(inp, sc, pool_map):
    return suites.origin_explore(sc.seed, inp.get("instances", 30), inp.get("selectors", 8)), [], []


_HANDLERS = {
    "hull": _set_op(lambda i: hull(i["points"]), "hull"),
    "support": _support,
    "minkowski-sum": _set_op(lambda i: minkowski_sum(i["X"], i["Y"]), "sum"),
    "scale": _set_op(lambda i: scale(i["X"], i["alpha"]), "scaled"),
    "intersect": _set_op(lambda i: intersect(i["X"], i["Y"]), "intersection"),
    "hausdorff": _hausdorff,
    "norm": _norm,
    "cover-diff": _set_op(lambda i: cover_diff(i["X"], i["Y"]), "cover_diff"),
    "erode-diff": _set_op(lambda i: erode_diff(i["X"], i["Y"]), "erode_diff"),
    "compare-forms": _compare,
    "gmp-support": _gmp_support,
    "gmp-minimal": _gmp_minimal,
    "gmp-oracle": _gmp_oracle,
    "gmp-norm": _gmp_norm,
    "gmp-equivalent": _gmp_equivalent,
    "eps-subdiff": _eps,
    "lipschitz-probe": _lipschitz,
    "graph-convexity": _graph,
    "lemma-suite": _lemma_suite,
    "mp-properties": _mp,
    "origin-explore": _explore,
}
