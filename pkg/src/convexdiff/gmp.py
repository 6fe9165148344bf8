"""Formal differences of convex sets and their inclusion-minimal elements.

A :class:`Collection` ``X / Y`` stands for the family of inclusion-minimal
compact convex sets ``Z`` with ``X`` contained in ``Y + Z``.  It is stored as
the pair ``(X, Y)``; the family itself is usually a continuum and is never
materialized.  Its support function is ``(X)_p - (Y)_p`` and linear
operations act on the pair.

Individual minimal elements are produced by :func:`minimal_element`.  The
extraction rests on one observation: ``Z`` is feasible exactly when it meets
every translate ``P_x = x - Y`` for ``x`` a vertex of ``X``.  The routine
tracks the pieces ``W_x = P_x & Z`` while cutting ``Z`` down direction by
direction, always at the lowest level that keeps every piece nonempty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _ndim
from . import arith
from .arith import sign, to_scalar, to_vector
from .geometry import (EMPTY, DimensionError, Polytope, _check, _clip_canon, _dot,
                       contains_set, direction_grid, dist_sq_point, halfspaces, intersect,
                       minkowski_sum, norm_sq, scale as scale_set, support_value)

__all__ = [
    "Collection", "MinimalElementReport", "NormBracket", "ConvergenceError", "BudgetExceeded",
    "make", "support", "add", "scale", "is_equivalent", "is_zero", "feasible",
    "minimal_element", "minimal_oracle", "collection_norm", "zero",
]


class ConvergenceError(RuntimeError):
    """Extraction did not settle within the sweep limit."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExceeded(RuntimeError):
    """A brute-force enumeration exceeded its node budget."""


@dataclass(frozen=True)
class Collection:
    """The formal difference ``minuend / subtrahend``."""

    minuend: Polytope
    subtrahend: Polytope

    def __post_init__(self):
        _check(self.minuend, self.subtrahend)

    @property
    def dim(self) -> int:
        return self.minuend.dim

    def support(self, p):
        return support(self, p)

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __mul__(self, alpha):
        return scale(self, alpha)

    __rmul__ = __mul__

    def inverse(self) -> "Collection":
        """Additive inverse ``Y / X``."""
        return Collection(self.subtrahend, self.minuend)


def make(X: Polytope, Y: Polytope | None = None) -> Collection:
    """``X / Y``; with ``Y`` omitted, the embedding ``X / {0}``."""
    if Y is None:
        Y = Polytope([(0,) * X.dim])
    return Collection(X, Y)


def zero(dim: int) -> Collection:
    o = Polytope([(0,) * dim])
    return Collection(o, o)


def _as_collection(c):
    return make(c) if isinstance(c, Polytope) else c


def support(C: Collection, p):
    """``inf`` of ``(Z)_p`` over the collection, i.e. ``(X)_p - (Y)_p``."""
    p = to_vector(p)
    if len(p) != C.dim:
        raise DimensionError("direction has the wrong dimension")
    return support_value(C.minuend, p) - support_value(C.subtrahend, p)


def add(C1, C2) -> Collection:
    """``(X / Y) + (Z / W) = (X + Z) / (Y + W)``; a bare set ``Z`` means ``Z / 0``."""
    C1, C2 = _as_collection(C1), _as_collection(C2)
    return Collection(minkowski_sum(C1.minuend, C2.minuend),
                      minkowski_sum(C1.subtrahend, C2.subtrahend))


def scale(C: Collection, alpha) -> Collection:
    """``alpha (X / Y) = (alpha X) / (alpha Y)`` for any sign of ``alpha``."""
    return Collection(scale_set(C.minuend, alpha), scale_set(C.subtrahend, alpha))


def is_equivalent(C1: Collection, C2: Collection) -> bool:
    """``X / Y ~ Z / W`` iff ``X + W == Z + Y``."""
    _check(C1.minuend, C2.minuend)
    left = minkowski_sum(C1.minuend, C2.subtrahend)
    right = minkowski_sum(C2.minuend, C1.subtrahend)
    if arith.exact():
        return left.vertices == right.vertices
    return contains_set(left, right) and contains_set(right, left)


def is_zero(C: Collection) -> bool:
    if arith.exact():
        return C.minuend.vertices == C.subtrahend.vertices
    return contains_set(C.minuend, C.subtrahend) and contains_set(C.subtrahend, C.minuend)


def feasible(Z: Polytope, C: Collection) -> bool:
    """True when ``X`` is contained in ``Y + Z``."""
    return contains_set(C.minuend, minkowski_sum(C.subtrahend, Z))


@dataclass(frozen=True)
class MinimalElementReport:
    """One extracted minimal element and how it was obtained.

    ``exact_minimal`` is a certificate: every translate ``x - Y`` meets the
    element in a single point, which rules out any smaller feasible subset.
    ``None`` means the certificate was not evaluated (LP path).
    """

    element: Polytope
    selector: tuple
    grid_size: int
    tolerance: float
    certified_feasible: bool
    exact_minimal: bool | None
    sweeps: int
    gap: object
    pieces: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        def enc(c):
            return str(c) if arith.is_rational(c) else float(c)
        return {
            "element": self.element.to_json(),
            "selector": [enc(c) for c in self.selector],
            "grid_size": self.grid_size,
            "tolerance": float(self.tolerance),
            "certified_feasible": self.certified_feasible,
            "exact_minimal": self.exact_minimal,
            "sweeps": self.sweeps,
            "gap": enc(self.gap),
        }


def _primitive(q):
    """Positive rescaling of a rational direction to coprime integers."""
    if not arith.exact():
        return tuple(float(c) for c in q)
    fr = [to_scalar(c) for c in q]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    nums = [int(c * den) for c in fr]
    g = 0
    for n in nums:
        g = math.gcd(g, n)
    return tuple(n // g for n in nums)


def _radical_inverse(k: int) -> float:
    r, f = 0.0, 0.5
    while k:
        if k & 1:
            r += f
        k >>= 1
        f /= 2
    return r


def _interleaved(grid, selector):
    """Grid directions starting next to the selector, angularly interleaved."""
    m = len(grid)
    start = max(range(m), key=lambda i: float(_dot(grid[i], selector)))
    return [grid[(start + k) % m] for k in sorted(range(m), key=_radical_inverse)]


def _normals(P: Polytope):
    return [n for n, _ in halfspaces(P)]


def _dedup_dirs(dirs):
    seen = set()
    out = []
    for q in dirs:
        if all(c == 0 for c in q):
            continue
        key = q if arith.exact() else tuple(round(c / max(abs(x) for x in q), 9) for c in q)
        if key not in seen:
            seen.add(key)
            out.append(q)
    return out


def _translates(C: Collection):
    negY = scale_set(C.subtrahend, -1).vertices
    return [tuple(tuple(a + b for a, b in zip(x, w)) for w in negY) for x in C.minuend.vertices]


def _default_tau():
    return 0 if arith.exact() else arith.TOL


def minimal_element(C: Collection, selector=None, m: int = 64, tau=None, *,
                    max_sweeps: int = 64, snap_selector: bool = False) -> MinimalElementReport:
    """Extract one (m, tau)-minimal element of ``C``.

    The selector direction is cut first, at its lowest feasible level, so the
    element attains the infimum ``(X)_p - (Y)_p`` there exactly.  Then ``m``
    grid directions and the facet normals of ``X`` and ``Y`` are swept.
    Pieces that remain two-dimensional are resolved by refinement cuts along
    facets of the already-forced core and, failing that, collapsed to the
    vertex nearest that core.
    """
    d = C.dim
    if d > 4:
        raise DimensionError(f"minimal elements are supported for d <= 4, got {d}")
    if d == 2 and m < 8:
        raise ValueError("need at least 8 grid directions")
    tau = _default_tau() if tau is None else to_scalar(tau)
    grid = direction_grid(m, d)
    if selector is None:
        selector = grid[0]
    selector = to_vector(selector)
    if len(selector) != d:
        raise DimensionError("selector has the wrong dimension")
    if all(c == 0 for c in selector):
        raise ValueError("selector must be nonzero")
    if snap_selector:
        selector = max(grid, key=lambda g: float(_dot(g, selector)) / math.sqrt(float(_dot(selector, selector))))
    if d >= 3:
        return _minimal_element_lp(C, selector, grid, m, tau)

    order = _dedup_dirs([_primitive(q) for q in
                         [selector] + _interleaved(grid, selector)
                         + _normals(C.minuend) + _normals(C.subtrahend)])
    P = _translates(C)
    W = [tuple(p) for p in P]
    sel = selector

    def cut(q):
        lo, hi = [], []
        for piece in W:
            vals = [_dot(q, w) for w in piece]
            lo.append(min(vals))
            hi.append(max(vals))
        s = max(lo)
        changed = False
        for i, piece in enumerate(W):
            if hi[i] - s > tau:
                W[i] = _clip_canon(piece, q, s)
                changed = True
        return changed

    def core():
        pts = [piece[0] for piece in W if len(piece) == 1]
        return Polytope(pts) if pts else None

    sweeps = 0
    pending = order
    while True:
        sweeps += 1
        if sweeps > max_sweeps:
            raise ConvergenceError(f"no convergence after {max_sweeps} sweeps",
                                   partial=Polytope([w for piece in W for w in piece]))
        changed = False
        for q in pending:
            changed |= cut(q)
        K = core()
        if K is not None:
            for i, piece in enumerate(W):
                if len(piece) > 1:
                    inter = intersect(Polytope._trusted(piece), K)
                    if inter is not EMPTY and inter.vertices != piece:
                        W[i] = inter.vertices
                        changed = True
            K = core()
        if all(len(piece) == 1 for piece in W):
            break
        if not changed:
            i = next(j for j, piece in enumerate(W) if len(piece) > 1)
            if K is None:
                pick = min(W[i], key=lambda v: (_dot(sel, v), v))
            else:
                pick = min(W[i], key=lambda v: (dist_sq_point(K, v), _dot(sel, v), v))
            W[i] = (pick,)
            K = core()
        hull_all = Polytope([w for piece in W for w in piece])
        pending = _dedup_dirs([_primitive(q) for q in
                               (_normals(K) if K is not None else []) + _normals(hull_all)])

    Z = Polytope([piece[0] for piece in W])
    certified = feasible(Z, C)
    exact_min = True
    for p in P:
        inter = intersect(Polytope._trusted(p), Z)
        if inter is EMPTY or len(inter.vertices) != 1:
            exact_min = False
            break
    gap = support_value(Z, selector) - support(C, selector)
    return MinimalElementReport(Z, selector, m, tau, certified, exact_min, sweeps, gap,
                                tuple(piece[0] for piece in W))


def _minimal_element_lp(C, selector, grid, m, tau):
    """Cutting sweep with LP subproblems for dimensions 3 and 4 (double precision)."""
    A, b, E, f = _ndim.hrep(C.subtrahend.to_numpy())
    xs = C.minuend.to_numpy()
    systems = [(-A, b - A @ x, -E, f - E @ x) for x in xs]
    dirs = [selector] + list(grid) + _normals(C.minuend) + _normals(C.subtrahend)
    tau = max(float(tau), 1e-9)
    cuts_A, cuts_b = [], []
    for q in dirs:
        qv = np.array([float(c) for c in q])
        if not np.any(qv):
            continue
        lows, highs = [], []
        for Ai, bi, Ei, fi in systems:
            AA = np.vstack([Ai] + cuts_A) if cuts_A else Ai
            bb = np.concatenate([bi, cuts_b]) if cuts_b else bi
            lows.append(_ndim.lp_min(qv, AA, bb, Ei, fi))
            highs.append(-_ndim.lp_min(-qv, AA, bb, Ei, fi))
        s = max(lows)
        if max(highs) - s > tau:
            cuts_A.append(qv[None, :])
            cuts_b.append(s + tau)
    pts = []
    for Ai, bi, Ei, fi in systems:
        AA = np.vstack([Ai] + cuts_A) if cuts_A else Ai
        bb = np.concatenate([bi, cuts_b]) if cuts_b else bi
        pts.extend(_ndim.vertex_enumerate(AA, bb, Ei, fi, tol=1e-7))
    Z = Polytope([[float(c) for c in p] for p in pts])
    certified = feasible(Z, C)
    gap = support_value(Z, selector) - support(C, selector)
    return MinimalElementReport(Z, selector, m, tau, certified, None, 1, gap)


def minimal_oracle(C: Collection, m: int = 8, ladder: int = 6, budget: int = 200_000) -> list:
    """Brute-force minimal halfspace systems on a discrete level ladder.

    Directions are the facet normals of ``X - Y`` plus ``m`` short integer
    directions spread over the circle (at most 24 in total).  Along each direction the levels
    run from ``(X)_q - (Y)_q`` up to ``(X - Y)_q`` and one rung beyond.  A
    level vector is kept when its system is feasible and lowering any single
    level by one rung makes it infeasible.  Returns the distinct candidate
    sets in a deterministic order.
    """
    d = C.dim
    if d > 2:
        raise DimensionError("the oracle is limited to d <= 2")
    if m > 24 or ladder > 12 or ladder < 3:
        raise ValueError("oracle needs m <= 24 and 3 <= ladder <= 12")
    X, Y = C.minuend, C.subtrahend
    negY = scale_set(Y, -1)
    dirs = _dedup_dirs([_primitive(q) for q in _normals(minkowski_sum(X, negY))
                        + _integer_grid(m, d)])
    if len(dirs) > 24:
        raise BudgetExceeded(f"{len(dirs)} directions exceed the oracle limit of 24")
    rungs = []
    for q in dirs:
        lb = support_value(X, q) - support_value(Y, q)
        mid = support_value(X, q) + support_value(negY, q)
        if sign(mid - lb) > 0:
            step = (mid - lb) / (ladder - 2)
            levels = [lb + k * step for k in range(ladder - 1)] + [mid + step]
        else:
            levels = [lb, lb + 1]
        rungs.append(levels)
    P = _translates(C)
    exact_vectors = arith.exact()
    if exact_vectors:
        # search in floating point, then re-verify every survivor exactly
        fl = lambda v: tuple(float(c) for c in v)
        with arith.arithmetic("double"):
            leaves = _ladder_search([tuple(fl(w) for w in piece) for piece in P],
                                    [fl(q) for q in dirs],
                                    [[float(s) for s in lv] for lv in rungs], budget)
    else:
        leaves = _ladder_search(P, dirs, rungs, budget)
    found = {}
    for idx in leaves:
        levels = [rungs[i][r] for i, r in enumerate(idx)]
        if exact_vectors and not _tight(P, dirs, rungs, idx):
            continue
        Zv = _box(rungs, dirs)
        for q, s in zip(dirs, levels):
            Zv = _clip_canon(Zv, q, s)
        Z = Polytope(Zv)
        found.setdefault(Z.vertices, Z)
    return [found[k] for k in sorted(found, key=lambda v: [tuple(float(c) for c in p) for p in v])]


def _meets_all(pieces, dirs, levels):
    for q, s in zip(dirs, levels):
        nxt = []
        for piece in pieces:
            c = _clip_canon(piece, q, s)
            if not c:
                return False
            nxt.append(c)
        pieces = nxt
    return True


def _tight(P, dirs, rungs, idx):
    levels = [rungs[i][r] for i, r in enumerate(idx)]
    if not _meets_all(P, dirs, levels):
        return False
    for i, r in enumerate(idx):
        if r > 0:
            trial = list(levels)
            trial[i] = rungs[i][r - 1]
            if _meets_all(P, dirs, trial):
                return False
    return True


def _ladder_search(P, dirs, rungs, budget):
    """Depth-first search for level vectors that are feasible and tight."""
    n = len(dirs)
    nodes = 0
    memo = {}

    def clip_all(pieces, q, s):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"oracle exceeded its budget of {budget} nodes")
        out = []
        for piece in pieces:
            c = _clip_canon(piece, q, s)
            if not c:
                return None
            out.append(c)
        return out

    def feasible_idx(idx):
        key = tuple(idx)
        if key not in memo:
            pieces = P
            for q, lv, r in zip(dirs, rungs, idx):
                pieces = clip_all(pieces, q, lv[r])
                if pieces is None:
                    break
            memo[key] = pieces is not None
        return memo[key]

    top = P
    for q, lv in zip(dirs, rungs):
        top = clip_all(top, q, lv[-1])
        if top is None:
            return []
    leaves = []

    D = np.array(dirs, dtype=float)
    below = np.array([[lv[r - 1] if r > 0 else -np.inf for r in range(len(lv))] for lv in
                      (lv + [lv[-1]] * (max(map(len, rungs)) - len(lv)) for lv in rungs)])
    slack = arith.tol()

    def reach(pieces):
        pts = np.array([w for piece in pieces for w in piece], dtype=float)
        return (pts @ D.T).max(axis=0)

    def dfs(k, pieces, chosen, hi):
        if k == n:
            for i, r in enumerate(chosen):
                if r > 0:
                    trial = list(chosen)
                    trial[i] = r - 1
                    if feasible_idx(trial):
                        return
            leaves.append(tuple(chosen))
            return
        q = dirs[k]
        for r, s in enumerate(rungs[k]):
            if r > 0 and below[k, r] >= hi[k] - slack:
                # every piece already lies below the previous rung: lowering
                # this level would change nothing, so it cannot be tight
                break
            nxt = clip_all(pieces, q, s)
            if nxt is None:
                continue
            h = reach(nxt)
            if any(below[i, ri] >= h[i] - slack for i, ri in enumerate(chosen)):
                # an earlier level has become redundant; pieces only shrink from here
                continue
            if r > 0:
                probe = clip_all(pieces, q, rungs[k][r - 1])
                j = k + 1
                while probe is not None and j < n:
                    probe = clip_all(probe, dirs[j], rungs[j][0])
                    j += 1
                if probe is not None:
                    break
            dfs(k + 1, nxt, chosen + [r], h)

    dfs(0, top, [], reach(top))
    return leaves


def _integer_grid(m, d):
    """Short integer directions roughly uniform on the circle (oracle only)."""
    if d == 1:
        return [(1,), (-1,)]
    out = []
    for k in range(m):
        th = 2 * math.pi * k / m
        out.append((round(4 * math.cos(th)), round(4 * math.sin(th))))
    return [tuple(to_scalar(c) for c in q) for q in out]


def _box(rungs, dirs):
    big = max(abs(lv[-1]) for lv in rungs)
    small = min(math.sqrt(float(_dot(q, q))) for q in dirs)
    R = to_scalar(10 * (1 + int(math.ceil(float(big) / small))))
    d = len(dirs[0])
    if d == 1:
        return ((-R,), (R,))
    return ((-R, -R), (R, -R), (R, R), (-R, R))


@dataclass(frozen=True)
class NormBracket:
    """Bracket ``lower <= ||X / Y|| <= upper`` with exact squared endpoints."""

    lower: float
    upper: float
    lower_sq: object
    upper_sq: object
    elements: tuple = field(default=(), repr=False)

    def __iter__(self):
        return iter((self.lower, self.upper))


def collection_norm(C: Collection, k: int = 8, m: int = 64) -> NormBracket:
    """Bracket the collection norm ``sup ||Z||`` over minimal elements.

    The lower end is the largest norm among elements extracted with ``k``
    uniformly spread selectors plus one selector aimed at each vertex of
    ``X - Y``; the upper end is ``||X - Y||``, which contains every minimal
    element.
    """
    Z0 = minkowski_sum(C.minuend, scale_set(C.subtrahend, -1))
    selectors = list(direction_grid(k, C.dim))
    selectors += [tuple(-c for c in w) for w in Z0.vertices if any(c != 0 for c in w)]
    reports = [minimal_element(C, s, m) for s in _dedup_dirs(selectors)]
    lower_sq = max(norm_sq(r.element) for r in reports)
    upper_sq = norm_sq(Z0)
    return NormBracket(arith.sqrt(lower_sq), arith.sqrt(upper_sq), lower_sq, upper_sq,
                       tuple(reports))
