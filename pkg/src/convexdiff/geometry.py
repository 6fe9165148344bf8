"""Convex polytope arithmetic in vertex representation.

Planar (and one-dimensional) sets are handled exactly when the arithmetic mode
is ``"rational"``; dimensions 3 and 4 go through floating-point LP helpers.
A :class:`Polytope` is always stored in canonical form: its vertex tuple lists
the extreme points only, counterclockwise from the lexicographic minimum in
2D and sorted lexicographically otherwise.  Structural equality of two
canonical polytopes is therefore set equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _ndim
from . import arith
from .arith import sign, to_scalar, to_vector

MAX_LP_DIM = 4

__all__ = [
    "Polytope", "EmptySet", "EMPTY", "Halfspace", "DimensionError",
    "hull", "support", "support_value", "minkowski_sum", "scale", "translate",
    "contains_point", "contains_set", "same_set", "intersect", "intersect_halfspaces",
    "hausdorff", "hausdorff_inclusion", "hormander_distance", "norm", "norm_sq",
    "halfspaces", "direction_grid", "unit_ball", "ball_deficiency", "dist_sq_point",
]


class DimensionError(ValueError):
    """Raised on mismatched or unsupported ambient dimensions."""


class EmptySet:
    """The explicit empty result of an intersection or difference."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    is_empty = True

    def __bool__(self):
        return False

    def __repr__(self):
        return "EMPTY"

    def __reduce__(self):
        return (EmptySet, ())


EMPTY = EmptySet()


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``{z : normal . z <= level}``."""

    normal: tuple
    level: object

    def __post_init__(self):
        normal = to_vector(self.normal)
        if all(c == 0 for c in normal):
            raise ValueError("halfspace normal must be nonzero")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "level", to_scalar(self.level))


@dataclass(frozen=True, init=False)
class Polytope:
    """Nonempty compact convex set given by its extreme points.

    The constructor accepts any nonempty point list and canonicalizes it,
    so ``Polytope(points)`` is the convex hull of ``points``.
    """

    vertices: tuple

    def __init__(self, points):
        object.__setattr__(self, "vertices", _canonical(_as_points(points)))

    @classmethod
    def _trusted(cls, vertices):
        obj = object.__new__(cls)
        object.__setattr__(obj, "vertices", tuple(vertices))
        return obj

    is_empty = False

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __repr__(self):
        def fmt(c):
            return str(c) if arith.is_rational(c) else repr(c)
        pts = ", ".join("(" + ", ".join(fmt(c) for c in v) + ")" for v in self.vertices)
        return f"Polytope([{pts}])"

    def __add__(self, other):
        if isinstance(other, Polytope):
            return minkowski_sum(self, other)
        return NotImplemented

    def __neg__(self):
        return scale(self, -1)

    def __rmul__(self, alpha):
        return scale(self, alpha)

    def to_numpy(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.vertices])

    def to_json(self) -> dict:
        def enc(c):
            return str(c) if arith.is_rational(c) else float(c)
        return {"dim": self.dim, "vertices": [[enc(c) for c in v] for v in self.vertices]}


def _as_points(points):
    pts = [p if isinstance(p, tuple) and p and _is_native(p[0]) else to_vector(p)
           for p in points]
    if not pts:
        raise ValueError("hull of an empty point set")
    d = len(pts[0])
    if any(len(p) != d for p in pts):
        raise DimensionError("points of mixed dimension")
    return pts


def _is_native(c):
    return type(c) is arith.mpq if arith.exact() else isinstance(c, float)


def _check(*sets):
    d = sets[0].dim
    for s in sets[1:]:
        if s.dim != d:
            raise DimensionError(f"dimension mismatch: {d} vs {s.dim}")
    return d


def _dot(p, v):
    return sum(a * b for a, b in zip(p, v))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _dedup_sorted(pts):
    out = [pts[0]]
    t = arith.tol()
    for p in pts[1:]:
        q = out[-1]
        if t:
            if max(abs(a - b) for a, b in zip(p, q)) > t:
                out.append(p)
        elif p != q:
            out.append(p)
    return out


def _hull2(pts):
    pts = _dedup_sorted(sorted(pts))
    if len(pts) <= 2:
        return tuple(pts)
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and sign(_cross(lower[-2], lower[-1], p)) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and sign(_cross(upper[-2], upper[-1], p)) <= 0:
            upper.pop()
        upper.append(p)
    cyc = lower[:-1] + upper[:-1]
    if len(cyc) == 2 or not cyc:
        return (pts[0], pts[-1])
    return tuple(cyc)


def _canonical(pts):
    d = len(pts[0])
    if d == 1:
        lo = min(pts)
        hi = max(pts)
        if sign(hi[0] - lo[0]) == 0:
            return (lo,)
        return (lo, hi)
    if d == 2:
        return _hull2(pts)
    if d > MAX_LP_DIM + 4:
        raise DimensionError(f"dimension {d} is not supported")
    pts = _dedup_sorted(sorted(set(pts)))
    if len(pts) == 1:
        return tuple(pts)
    arr = np.array([[float(c) for c in p] for p in pts])
    idx = _ndim.extreme_indices(arr)
    return tuple(sorted(pts[i] for i in idx))


def hull(points) -> Polytope:
    """Convex hull of a nonempty finite point set."""
    return Polytope(points)


def support_value(X: Polytope, p):
    """``max`` of ``p . v`` over the vertices of ``X``."""
    return max(_dot(p, v) for v in X.vertices)


def support(X: Polytope, p):
    """Support value of ``X`` at ``p`` and the face where it is attained."""
    p = to_vector(p)
    if len(p) != X.dim:
        raise DimensionError(f"direction has dimension {len(p)}, set has {X.dim}")
    vals = [_dot(p, v) for v in X.vertices]
    best = max(vals)
    face = [v for v, s in zip(X.vertices, vals) if sign(s - best) == 0]
    return best, Polytope(face)


def minkowski_sum(X: Polytope, Y: Polytope) -> Polytope:
    _check(X, Y)
    return Polytope([tuple(a + b for a, b in zip(x, y)) for x in X.vertices for y in Y.vertices])


def scale(X: Polytope, alpha) -> Polytope:
    alpha = to_scalar(alpha)
    if alpha == 0:
        return Polytope([(to_scalar(0),) * X.dim])
    pts = [tuple(alpha * c for c in v) for v in X.vertices]
    if alpha > 0 and X.dim <= 2:
        return Polytope._trusted(pts)
    return Polytope(pts)


def translate(X: Polytope, v) -> Polytope:
    v = to_vector(v)
    if len(v) != X.dim:
        raise DimensionError("translation vector has the wrong dimension")
    return Polytope._trusted(tuple(a + b for a, b in zip(x, v)) for x in X.vertices)


def norm_sq(X: Polytope):
    """Largest squared Euclidean norm over ``X`` (exact in rational mode)."""
    return max(_dot(v, v) for v in X.vertices)


def norm(X: Polytope) -> float:
    """``sup`` of the Euclidean norm over ``X``."""
    return arith.sqrt(norm_sq(X))


# --- halfspace descriptions and clipping (d <= 2) -------------------------

def halfspaces(X: Polytope) -> list[tuple[tuple, object]]:
    """Inequalities ``(normal, level)`` whose intersection is ``X`` (exact, d <= 2)."""
    d = X.dim
    vs = X.vertices
    one = to_scalar(1)
    zero = to_scalar(0)
    if d == 1:
        hs = [((one,), vs[-1][0]), ((-one,), -vs[0][0])]
        return hs
    if d != 2:
        A, b, E, f = _ndim.hrep(X.to_numpy())
        rows = [(tuple(a), c) for a, c in zip(A, b)]
        rows += [(tuple(e), c) for e, c in zip(E, f)] + [(tuple(-e), -c) for e, c in zip(E, f)]
        return [(tuple(to_scalar(float(x)) for x in n), to_scalar(float(c))) for n, c in rows]
    if len(vs) == 1:
        v = vs[0]
        return [((one, zero), v[0]), ((-one, zero), -v[0]),
                ((zero, one), v[1]), ((zero, -one), -v[1])]
    if len(vs) == 2:
        a, b = vs
        dx, dy = b[0] - a[0], b[1] - a[1]
        n = (dy, -dx)
        return [(n, _dot(n, a)), ((-dy, dx), -_dot(n, a)),
                ((dx, dy), dx * b[0] + dy * b[1]), ((-dx, -dy), -(dx * a[0] + dy * a[1]))]
    out = []
    k = len(vs)
    for i in range(k):
        a, b = vs[i], vs[(i + 1) % k]
        n = (b[1] - a[1], a[0] - b[0])
        out.append((n, _dot(n, a)))
    return out


def _clip(verts, normal, level):
    """Clip a canonical vertex cycle (d <= 2) by ``normal . z <= level``.

    Returns the raw clipped cycle (possibly empty); callers canonicalize.
    """
    vals = [_dot(normal, v) - level for v in verts]
    sg = [sign(v) for v in vals]
    if max(sg) <= 0:
        return list(verts)
    if min(sg) > 0:
        return []
    out = []
    n = len(verts)
    for i in range(n):
        j = (i + 1) % n
        u, su = verts[i], sg[i]
        if su <= 0:
            out.append(u)
        sv = sg[j]
        if su * sv < 0:
            fu, fv = vals[i], vals[j]
            t = fu / (fu - fv)
            v = verts[j]
            out.append(tuple(a + t * (b - a) for a, b in zip(u, v)))
    return out


def _clip_canon(verts, normal, level):
    out = _clip(verts, normal, level)
    if not out:
        return ()
    if len(out) == len(verts) and out == list(verts):
        return tuple(verts)
    return _canonical(out)


def intersect_halfspaces(X: Polytope, hs) -> Polytope | EmptySet:
    """Clip ``X`` by each halfspace in order."""
    items = [(h.normal, h.level) if isinstance(h, Halfspace) else (to_vector(h[0]), to_scalar(h[1]))
             for h in hs]
    for n, _ in items:
        if len(n) != X.dim:
            raise DimensionError("halfspace normal has the wrong dimension")
    if X.dim <= 2:
        verts = X.vertices
        for n, s in items:
            verts = _clip_canon(verts, n, s)
            if not verts:
                return EMPTY
        return Polytope._trusted(verts)
    _lp_dim(X.dim)
    A, b, E, f = _ndim.hrep(X.to_numpy())
    if items:
        A = np.vstack([A] + [np.array([[float(c) for c in n]]) for n, _ in items])
        b = np.concatenate([b, [float(s) for _, s in items]])
    return _from_enum(_ndim.vertex_enumerate(A, b, E, f))


def _lp_dim(d):
    if d > MAX_LP_DIM:
        raise DimensionError(f"intersection is limited to dimension <= {MAX_LP_DIM}, got {d}")


def _from_enum(pts):
    if len(pts) == 0:
        return EMPTY
    return Polytope([[float(c) for c in p] for p in pts])


def intersect(X: Polytope, Y: Polytope) -> Polytope | EmptySet:
    """``X`` intersected with ``Y``, or :data:`EMPTY`."""
    d = _check(X, Y)
    if d <= 2:
        verts = X.vertices
        for n, s in halfspaces(Y):
            verts = _clip_canon(verts, n, s)
            if not verts:
                return EMPTY
        return Polytope._trusted(verts)
    _lp_dim(d)
    A1, b1, E1, f1 = _ndim.hrep(X.to_numpy())
    A2, b2, E2, f2 = _ndim.hrep(Y.to_numpy())
    return _from_enum(_ndim.vertex_enumerate(np.vstack([A1, A2]), np.concatenate([b1, b2]),
                                             np.vstack([E1, E2]), np.concatenate([f1, f2])))


# --- membership -------------------------------------------------------------

def contains_point(X: Polytope, v) -> bool:
    """Exact membership ``v in X`` (LP feasibility above dimension 2)."""
    v = to_vector(v)
    if len(v) != X.dim:
        raise DimensionError("point has the wrong dimension")
    if X.dim <= 2:
        return all(sign(_dot(n, v) - s) <= 0 for n, s in halfspaces(X))
    return _ndim.in_hull(X.to_numpy(), np.array([float(c) for c in v]))


def contains_set(X: Polytope, Y: Polytope) -> bool:
    """True when ``X`` is a subset of ``Y`` (every vertex of ``X`` lies in ``Y``)."""
    d = _check(X, Y)
    if d <= 2:
        hs = halfspaces(Y)
        return all(sign(_dot(n, v) - s) <= 0 for v in X.vertices for n, s in hs)
    V = Y.to_numpy()
    return all(_ndim.in_hull(V, np.array([float(c) for c in v])) for v in X.vertices)


def same_set(X: Polytope, Y: Polytope) -> bool:
    """Set equality; structural in rational mode, tolerant in double mode."""
    if X.dim != Y.dim:
        return False
    if arith.exact():
        return X.vertices == Y.vertices
    if len(X.vertices) == len(Y.vertices) and all(
            max(abs(a - b) for a, b in zip(u, v)) <= arith.TOL
            for u, v in zip(X.vertices, Y.vertices)):
        return True
    return contains_set(X, Y) and contains_set(Y, X)


# --- metrics -------------------------------------------------------------------

def _seg_dist_sq(x, a, b):
    d = tuple(q - p for p, q in zip(a, b))
    dd = _dot(d, d)
    w = tuple(p - q for p, q in zip(x, a))
    if dd == 0:
        return _dot(w, w)
    t = _dot(w, d) / dd
    if t <= 0:
        return _dot(w, w)
    if t >= 1:
        e = tuple(p - q for p, q in zip(x, b))
        return _dot(e, e)
    e = tuple(wi - t * di for wi, di in zip(w, d))
    return _dot(e, e)


def dist_sq_point(Y: Polytope, x):
    """Squared distance from ``x`` to ``Y`` (exact for d <= 2)."""
    x = tuple(x)
    if Y.dim > 2:
        return _ndim.distance_to_hull(Y.to_numpy(), np.array([float(c) for c in x])) ** 2
    if contains_point(Y, x):
        return to_scalar(0)
    vs = Y.vertices
    if len(vs) == 1:
        return _seg_dist_sq(x, vs[0], vs[0])
    k = len(vs)
    if k == 2:
        return _seg_dist_sq(x, vs[0], vs[1])
    return min(_seg_dist_sq(x, vs[i], vs[(i + 1) % k]) for i in range(k))


def _excess_sq(X, Y):
    return max(dist_sq_point(Y, x) for x in X.vertices)


def hausdorff(X: Polytope, Y: Polytope) -> float:
    """Hausdorff distance ``max(d0(X, Y), d0(Y, X))``."""
    _check(X, Y)
    return arith.sqrt(max(_excess_sq(X, Y), _excess_sq(Y, X)))


def hausdorff_sq(X: Polytope, Y: Polytope):
    """Squared Hausdorff distance, exact in rational mode for d <= 2."""
    _check(X, Y)
    return max(_excess_sq(X, Y), _excess_sq(Y, X))


# --- directions and the polygonal unit ball --------------------------------

def _rational_unit(theta: float, denominator: int = 10 ** 4):
    flip = False
    th = math.remainder(theta, 2 * math.pi)
    if abs(th) > math.pi / 2:
        th = math.remainder(th + math.pi, 2 * math.pi)
        flip = True
    t = Fraction(math.tan(th / 2)).limit_denominator(denominator)
    den = 1 + t * t
    p = ((1 - t * t) / den, 2 * t / den)
    return (-p[0], -p[1]) if flip else p


def direction_grid(m: int, dim: int = 2, offset: float = 0.0) -> list[tuple]:
    """``m`` roughly uniform unit directions.

    In 2D and rational mode the directions are rational points lying exactly
    on the unit circle, so support values at them are exact.
    """
    if dim == 1:
        return [to_vector([1]), to_vector([-1])]
    if dim == 2:
        out = []
        for k in range(m):
            th = offset + 2 * math.pi * k / m
            if arith.exact():
                out.append(to_vector(_rational_unit(th)))
            else:
                out.append((math.cos(th), math.sin(th)))
        return out
    if dim == 3:
        golden = math.pi * (3 - math.sqrt(5))
        pts = []
        for k in range(m):
            z = 1 - 2 * (k + 0.5) / m
            r = math.sqrt(1 - z * z)
            pts.append((r * math.cos(golden * k), r * math.sin(golden * k), z))
    else:
        rng = np.random.default_rng(12345)
        raw = rng.normal(size=(m, dim))
        pts = [tuple(r / np.linalg.norm(r)) for r in raw]
    axes = [tuple(float(s) if i == j else 0.0 for j in range(dim)) for i in range(dim) for s in (1, -1)]
    return [to_vector(p) for p in axes + [tuple(float(c) for c in p) for p in pts]]


def unit_ball(m: int = 64, dim: int = 2) -> Polytope:
    """Inscribed polytopal approximation of the closed unit ball."""
    return Polytope(direction_grid(m, dim))


def ball_deficiency(B: Polytope) -> float:
    """``c`` such that ``(B)_q >= c |q|`` for the planar ball approximation ``B``.

    For a regular inscribed m-gon this is ``cos(pi / m)``.
    """
    if B.dim == 1:
        return 1.0
    angles = sorted(math.atan2(float(v[1]), float(v[0])) for v in B.vertices)
    gaps = [b - a for a, b in zip(angles, angles[1:])] + [angles[0] + 2 * math.pi - angles[-1]]
    return math.cos(max(gaps) / 2)


def hausdorff_inclusion(X: Polytope, Y: Polytope, B: Polytope | None = None):
    """``inf{e >= 0 : X in Y + eB and Y in X + eB}`` for a polytopal ball ``B``.

    Computed exactly from the facet normals of ``Y + eB`` and ``X + eB``.
    """
    d = _check(X, Y)
    if d > 2:
        raise DimensionError("inclusion-form distance is implemented for d <= 2")
    if B is None:
        B = unit_ball(64, d)

    def one_sided(A, C):
        best = to_scalar(0)
        for n, _ in halfspaces(C) + halfspaces(B):
            hb = support_value(B, n)
            if hb <= 0:
                continue
            r = (support_value(A, n) - support_value(C, n)) / hb
            if r > best:
                best = r
        return best

    return max(one_sided(X, Y), one_sided(Y, X))


def hormander_distance(X: Polytope, Y: Polytope, m: int = 4096) -> float:
    """``sup`` over unit directions of ``|(X)_p - (Y)_p|``, sampled on ``m`` directions.

    This is the Hausdorff distance up to the sampling of the sphere; when
    ``Y`` is a subset of ``X`` the absolute value can be dropped.
    """
    _check(X, Y)
    dirs = direction_grid(m, X.dim)
    return float(max(abs(support_value(X, p) - support_value(Y, p)) for p in dirs))
