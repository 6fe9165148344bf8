"""Seeded property sweeps shared by the command line and the test suite.

Each sweep returns a JSON-ready dict with at least ``passed``, ``instances``
and ``failures``; failing sweeps also carry a ``witness``.
"""

from __future__ import annotations

import random

from . import arith, gmp
from . import generators as gen
from .epsilon import eps_subdiff, graph_convexity_check, lipschitz_probe
from .geometry import (Polytope, contains_point, contains_set, direction_grid, minkowski_sum,
                       norm_sq, same_set, scale, support_value)
from .setdiff import compare_intersection_forms, cover_diff, erode_diff

__all__ = [
    "lemma_suite", "mp_properties", "containment_check", "norm_identities", "selector_gap_sweep",
    "origin_explore", "graph_convexity_sweep", "lipschitz_sweep", "GAMMAS",
]

GAMMAS = ("0", "1/4", "1/2", "3/4", "1")


def _enc(c):
    return str(c) if arith.is_rational(c) else float(c)


def _result(name, instances, failures, witness=None, **extra):
    out = {"name": name, "passed": failures == 0, "instances": instances, "failures": failures}
    if witness is not None:
        out["witness"] = witness
    out.update(extra)
    return out


def _pair_json(X, Y):
    return {"X": X.to_json(), "Y": Y.to_json()}


def common_summand(r, instances):
    fails, witness = 0, None
    for _ in range(instances):
        X, Y, Z = (gen.random_polygon(r) for _ in range(3))
        if not gmp.is_equivalent(gmp.make(X, Y), gmp.make(X + Z, Y + Z)):
            fails += 1
            witness = witness or {**_pair_json(X, Y), "Z": Z.to_json()}
    return _result("common-summand-equivalence", instances, fails, witness)


def scaled_difference(r, instances, m=64, oracle=(8, 6)):
    grid = direction_grid(32)
    fails, oracle_fails, witness = 0, 0, None
    for _ in range(instances):
        X = gen.random_polygon(r)
        for g in GAMMAS:
            gamma = arith.to_scalar(g)
            C = gmp.make(X, scale(X, gamma))
            rep = gmp.minimal_element(C, r.choice(grid), m)
            target = scale(X, 1 - gamma)
            ok = rep.certified_feasible and _close(rep.element, target)
            cands = gmp.minimal_oracle(C, *oracle)
            if len(cands) != 1:
                oracle_fails += 1
                ok = False
            if not ok:
                fails += 1
                witness = witness or {"X": X.to_json(), "gamma": g,
                                      "element": rep.element.to_json(),
                                      "oracle_candidates": len(cands)}
    return _result("scaled-difference", instances * len(GAMMAS), fails, witness,
                   oracle_failures=oracle_fails)


def _close(A, B, tau=None):
    if arith.exact() and not tau:
        return same_set(A, B)
    from .geometry import hausdorff
    return hausdorff(A, B) <= (tau or arith.TOL)


def zero_criterion(r, instances):
    fails, witness = 0, None
    eps = arith.to_scalar("1/1000000000")
    for k in range(instances):
        X = gen.random_polygon(r)
        kind = k % 3
        if kind == 0:
            Y = Polytope(list(reversed(X.vertices)))
        elif kind == 1:
            v = X.vertices[0]
            Y = Polytope([tuple(c + eps for c in v)] + list(X.vertices[1:]))
        else:
            Y = gen.random_polygon(r)
        if gmp.is_zero(gmp.make(X, Y)) != same_set(X, Y):
            fails += 1
            witness = witness or _pair_json(X, Y)
    return _result("zero-criterion", instances, fails, witness)


def origin_membership(r, instances, selectors=4, m=64, oracle=(4, 4), max_vertices=4):
    grid = direction_grid(selectors, 2, 0.3)
    origin = (arith.to_scalar(0),) * 2
    fails, extracted, candidates, witness = 0, 0, 0, None
    for _ in range(instances):
        X, Y = gen.random_nested_pair(r, max_vertices=max_vertices)
        C = gmp.make(X, Y)
        elems = [gmp.minimal_element(C, p, m).element for p in grid]
        cands = gmp.minimal_oracle(C, *oracle)
        extracted += len(elems)
        candidates += len(cands)
        bad = [Z for Z in elems + cands if not contains_point(Z, origin)]
        if bad:
            fails += 1
            witness = witness or {**_pair_json(X, Y), "element": bad[0].to_json()}
    return _result("origin-membership", instances, fails, witness,
                   extracted=extracted, oracle_candidates=candidates)


def lemma_suite(seed: int = 7, instances: int = 100, scaled_instances: int | None = None,
                oracle=(4, 4)) -> dict:
    """The four collection properties on seeded random instances, one entry each."""
    r = random.Random(seed)
    parts = [common_summand(r, instances),
             scaled_difference(r, scaled_instances or max(1, instances // 5)),
             zero_criterion(r, instances),
             origin_membership(r, instances, oracle=oracle)]
    return {"passed": all(p["passed"] for p in parts), "lemmas": parts}


def mp_properties(seed: int = 0, instances: int = 100) -> dict:
    """Covering and erosion properties plus the intersection-form comparison."""
    r = random.Random(seed)
    cover_fails = erode_fails = nonempty_c = nonempty_e = 0
    disagreements = 0
    witness = None
    for _ in range(instances):
        # a small minuend and a large subtrahend so that covers exist
        X, Y = gen.random_polygon(r, max_vertices=5, box=1), gen.random_polygon(r)
        D = cover_diff(X, Y)
        if D:
            nonempty_c += 1
            if not contains_set(X, minkowski_sum(D, Y)):
                cover_fails += 1
        E = erode_diff(Y, X)
        if E:
            nonempty_e += 1
            if not contains_set(minkowski_sum(E, X), Y):
                erode_fails += 1
        cmp = compare_intersection_forms(X, Y)
        if not cmp["agree"]:
            disagreements += 1
            if witness is None:
                witness = {"X": X.to_json(), "Y": Y.to_json(),
                           "point": [_enc(c) for c in cmp["witness"]],
                           "point_covers": cmp["witness_covers"],
                           "cover_diff": _json_or_empty(cmp["cover_diff"]),
                           "reflected_form": _json_or_empty(cmp["reflected"])}
    # does 0 in Y force cover_diff(X, Y) inside X?  Only reported.
    origin = (arith.to_scalar(0),) * 2
    escapes, checked, escape_witness = 0, 0, None
    for _ in range(instances):
        X = gen.random_polygon(r, max_vertices=5, box=1)
        Y = Polytope(list(gen.random_polygon(r).vertices) + [origin])
        D = cover_diff(X, Y)
        if D:
            checked += 1
            if not contains_set(D, X):
                escapes += 1
                escape_witness = escape_witness or {**_pair_json(X, Y), "cover_diff": D.to_json()}
    return {
        "passed": cover_fails == 0 and erode_fails == 0 and witness is not None,
        "origin_in_Y_cover_inside_X": {"instances": checked, "counterexamples": escapes,
                                       "witness": escape_witness},
        "covering": _result("covering", nonempty_c, cover_fails),
        "erosion": _result("erosion", nonempty_e, erode_fails),
        "sign_discrepancy": {"instances": instances, "disagreements": disagreements,
                             "matching_form": "intersection of x - Y over x in X",
                             "witness": witness},
    }


def _json_or_empty(S):
    return S.to_json() if S else None


def containment_check(seed: int = 0, instances: int = 50, oracle=(4, 4),
                      max_vertices: int = 4, k: int = 8, m: int = 64) -> dict:
    """Oracle candidates stay inside ``X - Y``; norm brackets are ordered."""
    r = random.Random(seed)
    escapes = bracket_fails = 0
    witness = None
    total = 0
    for _ in range(instances):
        X = gen.random_polygon(r, max_vertices=max_vertices)
        Y = gen.random_polygon(r, max_vertices=max_vertices)
        C = gmp.make(X, Y)
        Z0 = minkowski_sum(X, scale(Y, -1))
        cands = gmp.minimal_oracle(C, *oracle)
        total += len(cands)
        out = [Z for Z in cands if not contains_set(Z, Z0)]
        if out:
            escapes += 1
            witness = witness or {**_pair_json(X, Y), "candidate": out[0].to_json()}
        b = gmp.collection_norm(C, k, m)
        if not (b.lower_sq <= b.upper_sq
                and arith.sqrt_le_sum(b.upper_sq, norm_sq(X), norm_sq(Y))):
            bracket_fails += 1
    return {"passed": escapes == 0 and bracket_fails == 0,
            "containment": _result("oracle-candidates-inside-X-minus-Y", instances, escapes,
                                   witness, candidates=total),
            "norm_bracket": _result("norm-bracket", instances, bracket_fails)}


def norm_identities(seed: int = 0, instances: int = 50) -> dict:
    r = random.Random(seed)
    fails = 0
    for _ in range(instances):
        X = gen.random_polygon(r)
        zero = Polytope([(0, 0)])
        a = gmp.collection_norm(gmp.make(X, zero))
        b = gmp.collection_norm(gmp.make(zero, X))
        want = norm_sq(X)
        if not (a.lower_sq == a.upper_sq == want and b.lower_sq == b.upper_sq == want):
            fails += 1
    return _result("norm-identities", instances, fails)


def selector_gap_sweep(seed: int = 3, pairs: int = 20, selectors: int = 32,
                   grids=(16, 64, 256)) -> dict:
    """Gap ``(Z)_p - ((X)_p - (Y)_p)`` at the selector over growing grids."""
    r = random.Random(seed)
    inst = [(gen.random_polygon(r), gen.random_polygon(r)) for _ in range(pairs)]
    sels = direction_grid(selectors, 2, 0.1)
    rows = []
    negative = 0
    for m in grids:
        worst = None
        lowest = None
        for X, Y in inst:
            C = gmp.make(X, Y)
            for p in sels:
                rep = gmp.minimal_element(C, p, m)
                gap = support_value(rep.element, p) - gmp.support(C, p)
                if arith.sign(gap) < 0:
                    negative += 1
                worst = gap if worst is None or gap > worst else worst
                lowest = gap if lowest is None or gap < lowest else lowest
        rows.append({"m": m, "max_gap": _enc(worst), "min_gap": _enc(lowest)})
    maxima = [float(row["max_gap"]) for row in rows]
    monotone = all(b <= a for a, b in zip(maxima, maxima[1:]))
    return {"passed": negative == 0 and monotone and maxima[-1] < 1e-2,
            "negative_gaps": negative, "non_increasing": monotone, "grids": rows,
            "pairs": pairs, "selectors": selectors}


def origin_explore(seed: int = 0, instances: int = 30, selectors: int = 8, m: int = 64) -> dict:
    """Probe two would-be generalizations of origin membership for ``X`` inside ``X'``.

    ``swapped``: does every minimal element of ``X / X'`` contain the origin?
    ``monotone``: with a shared selector, is the element of ``X / Y`` inside
    the element of ``X' / Y``?  Observed violations are reported, nothing
    is asserted.
    """
    r = random.Random(seed)
    grid = direction_grid(selectors, 2, 0.2)
    origin = (arith.to_scalar(0),) * 2
    swapped = monotone = 0
    wit_s = wit_m = None
    for _ in range(instances):
        Xp, X = gen.random_nested_pair(r, max_vertices=5)
        Y = gen.random_polygon(r, max_vertices=4, box=1)
        for p in grid:
            Z = gmp.minimal_element(gmp.make(X, Xp), p, m).element
            if not contains_point(Z, origin):
                swapped += 1
                wit_s = wit_s or {"X": X.to_json(), "X_prime": Xp.to_json(),
                                  "element": Z.to_json()}
            Z1 = gmp.minimal_element(gmp.make(X, Y), p, m).element
            Z2 = gmp.minimal_element(gmp.make(Xp, Y), p, m).element
            if not contains_set(Z1, Z2):
                monotone += 1
                wit_m = wit_m or {"X": X.to_json(), "X_prime": Xp.to_json(), "Y": Y.to_json(),
                                  "small": Z1.to_json(), "large": Z2.to_json()}
    probes = instances * len(grid)
    return {"probes": probes,
            "swapped_roles": {"violations": swapped, "witness": wit_s},
            "monotone_in_minuend": {"violations": monotone, "witness": wit_m}}


def _random_query(r, dim=None):
    d = dim or r.choice((1, 2))
    f = gen.random_max_affine(r, dim=d)
    x = tuple(arith.to_scalar(f"{r.randint(-8, 8)}/4") for _ in range(d))
    return f, x


def graph_convexity_sweep(seed: int = 0, probes: int = 500) -> dict:
    r = random.Random(seed)
    fails, witness = 0, None
    for _ in range(probes):
        f, x = _random_query(r)
        e1, e2 = (arith.to_scalar(f"{r.randint(0, 16)}/4") for _ in range(2))
        t = arith.to_scalar(f"{r.randint(0, 8)}/8")
        if not graph_convexity_check(f, x, e1, e2, t):
            fails += 1
            witness = witness or {"pieces": len(f.pieces), "x": [_enc(c) for c in x],
                                  "eps1": _enc(e1), "eps2": _enc(e2), "t": _enc(t)}
    return _result("graph-convexity", probes, fails, witness)


def lipschitz_sweep(seed: int = 0, functions: int = 10, eps="1", upsilon="1/2",
                    pairs: int = 200) -> dict:
    """Sampled Lipschitz ratios for random max-affine functions and ``|x|``."""
    from .epsilon import PWLConvexFunction
    r = random.Random(seed)
    cases = [_random_query(r) for _ in range(functions)]
    cases.append((PWLConvexFunction([((1,), 0), ((-1,), 0)]), (arith.to_scalar(1),)))
    rows = []
    fails = 0
    for k, (f, x) in enumerate(cases):
        rep = lipschitz_probe(f, x, eps, upsilon, n=pairs, seed=seed + k)
        ok = rep.violations == 0 and rep.L_emp <= rep.L_bound
        fails += not ok
        rows.append({"pieces": len(f.pieces), "dim": f.dim, "L_emp": rep.L_emp,
                     "L_bound": rep.L_bound, "violations": rep.violations, "pairs": rep.pairs})
    return {**_result("lipschitz", len(cases), fails), "cases": rows}


def eps_table(f, x, levels) -> list:
    return [{"eps": _enc(arith.to_scalar(e)), "set": eps_subdiff(f, x, e).to_json()}
            for e in levels]
