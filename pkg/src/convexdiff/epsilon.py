"""Approximate subdifferentials of max-affine convex functions.

For ``f(y) = max_i a_i . y + b_i`` the set ``D(eps)`` of ``eps``-subgradients
at ``x`` is the image of the simplex slice

    {lambda >= 0, sum(lambda) = 1, sum(lambda_i * g_i) <= eps}

under ``lambda -> sum(lambda_i * a_i)``, where ``g_i = f(x) - a_i . x - b_i``
is the gap of piece ``i`` at ``x``.  The slice is cut from the simplex by a
single halfspace, so its vertices are the pieces with ``g_i <= eps`` and one
mixture of each pair straddling the level ``eps``.  Mapping those vertices
and taking the hull gives ``D(eps)`` exactly.

:func:`eps_subdiff_oracle` tests the defining inequality
``f(y) - f(x) >= g . (y - x) - eps`` directly, without the simplex picture,
and serves as the independent check.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import arith
from .arith import sign, to_scalar, to_vector
from .geometry import (DimensionError, Polytope, _dot, contains_set, hausdorff, hull,
                       minkowski_sum, norm, scale)

__all__ = [
    "PWLConvexFunction", "EpsSubdiffQuery", "LipschitzReport", "evaluate", "eps_subdiff",
    "eps_subdiff_oracle", "gaps", "graph_convexity_check", "lipschitz_probe", "oracle_radius",
]


class PWLConvexFunction:
    """Pointwise maximum of affine pieces ``a . y + b``.

    Parameters
    ----------
    pieces : iterable of (gradient, offset)
        At least one piece; all gradients share one dimension.  Exact
        duplicates are dropped, keeping first occurrences.
    """

    def __init__(self, pieces):
        out = []
        seen = set()
        for a, b in pieces:
            key = (to_vector(a), to_scalar(b))
            if key not in seen:
                seen.add(key)
                out.append(key)
        if not out:
            raise ValueError("a max-affine function needs at least one piece")
        d = len(out[0][0])
        if d == 0 or any(len(a) != d for a, _ in out):
            raise DimensionError("all gradients must share one positive dimension")
        self.pieces = tuple(out)

    @property
    def dim(self) -> int:
        return len(self.pieces[0][0])

    def __call__(self, y):
        return evaluate(self, y)[0]

    def __repr__(self):
        return f"PWLConvexFunction({len(self.pieces)} pieces, dim={self.dim})"

    def __eq__(self, other):
        return isinstance(other, PWLConvexFunction) and self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    @property
    def gradients(self) -> list:
        return [a for a, _ in self.pieces]


@dataclass(frozen=True)
class EpsSubdiffQuery:
    """Evaluation point and tolerance, ``eps >= 0``."""

    x: tuple
    eps: object

    def __post_init__(self):
        object.__setattr__(self, "x", to_vector(self.x))
        object.__setattr__(self, "eps", to_scalar(self.eps))
        if sign(self.eps) < 0:
            raise ValueError("eps must be nonnegative")


def evaluate(f: PWLConvexFunction, x):
    """Value of ``f`` at ``x`` and the indices of the pieces attaining it."""
    x = to_vector(x)
    if len(x) != f.dim:
        raise DimensionError(f"point has dimension {len(x)}, function has {f.dim}")
    vals = [_dot(a, x) + b for a, b in f.pieces]
    top = max(vals)
    return top, frozenset(i for i, v in enumerate(vals) if sign(top - v) <= 0)


def _query(f, x, eps):
    q = x if isinstance(x, EpsSubdiffQuery) else EpsSubdiffQuery(x, eps)
    if len(q.x) != f.dim:
        raise DimensionError(f"point has dimension {len(q.x)}, function has {f.dim}")
    return q


def gaps(f: PWLConvexFunction, x) -> list:
    """``f(x) - (a_i . x + b_i)`` for every piece."""
    x = to_vector(x)
    vals = [_dot(a, x) + b for a, b in f.pieces]
    top = max(vals)
    return [top - v for v in vals]


def eps_subdiff(f: PWLConvexFunction, x, eps=None) -> Polytope:
    """The ``eps``-subdifferential of ``f`` at ``x`` as a polytope.

    Accepts either ``(f, x, eps)`` or ``(f, EpsSubdiffQuery)``.

    Examples
    --------
    >>> f = PWLConvexFunction([((1,), 0), ((-1,), 0)])
    >>> eps_subdiff(f, (1,), "1/2").vertices
    ((Fraction(1, 2),), (Fraction(1, 1),))
    """
    q = _query(f, x, eps)
    g = gaps(f, q.x)
    e = q.eps
    grads = f.gradients
    pts = [a for a, gi in zip(grads, g) if sign(gi - e) <= 0]
    for i, j in itertools.permutations(range(len(g)), 2):
        if sign(g[i] - e) < 0 < sign(g[j] - e):
            span = g[j] - g[i]
            li, lj = (g[j] - e) / span, (e - g[i]) / span
            pts.append(tuple(li * u + lj * v for u, v in zip(grads[i], grads[j])))
    return hull(pts)


def oracle_radius(f: PWLConvexFunction, x) -> float:
    """Default sampling radius ``10 (1 + max|a| + max|b| + |x|)``."""
    x = [float(c) for c in to_vector(x)]
    amax = max(math.sqrt(sum(float(c) ** 2 for c in a)) for a, _ in f.pieces)
    bmax = max(abs(float(b)) for _, b in f.pieces)
    return 10.0 * (1.0 + amax + bmax + math.sqrt(sum(c * c for c in x)))


def _sample_points(A, b, x, radius, points):
    """Grid, box corners, ``x`` and the vertices of the piece arrangement in the box."""
    d = A.shape[1]
    lo, hi = x - radius, x + radius
    axes = [np.linspace(lo[k], hi[k], points) for k in range(d)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    extra = [x[None, :]]
    # hyperplanes where two pieces tie, plus the box walls
    planes = [(A[i] - A[j], b[j] - b[i]) for i, j in itertools.combinations(range(len(A)), 2)
              if np.any(A[i] != A[j])]
    for k in range(d):
        e = np.zeros(d)
        e[k] = 1.0
        planes += [(e, lo[k]), (e, hi[k])]
    for combo in itertools.combinations(planes, d):
        M = np.array([c[0] for c in combo])
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        y = np.linalg.solve(M, np.array([c[1] for c in combo]))
        if np.all(y >= lo - 1e-9) and np.all(y <= hi + 1e-9):
            extra.append(y[None, :])
    return np.vstack([grid] + extra)


def _ray_directions(d, points):
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        th = np.linspace(0.0, 2 * np.pi, 4 * (points - 1), endpoint=False)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    axes = np.linspace(-1.0, 1.0, 11)
    u = np.stack(np.meshgrid(*([axes] * d), indexing="ij"), axis=-1).reshape(-1, d)
    u = u[np.linalg.norm(u, axis=1) > 0]
    return u / np.linalg.norm(u, axis=1)[:, None]


def eps_subdiff_oracle(f: PWLConvexFunction, x, eps, g, *, radius: float | None = None,
                       points: int = 101, tol: float = 1e-9, rays: bool = True) -> bool:
    """Check ``f(y) - f(x) >= g . (y - x) - eps`` at sampled ``y``.

    Samples a ``points``-per-axis grid on the box of half-width ``radius``
    around ``x`` (default :func:`oracle_radius`), the box corners, ``x``
    itself and every vertex of the piece arrangement inside the box.  With
    ``rays`` the inequality is also tested along ``y = x + t u`` as
    ``t -> inf`` for sampled unit ``u``, which reduces to
    ``max_i a_i . u >= g . u``.  Runs in floating point with slack ``tol``.
    """
    A = np.array([[float(c) for c in a] for a, _ in f.pieces])
    b = np.array([float(c) for _, c in f.pieces])
    xv = np.array([float(c) for c in to_vector(x)])
    gv = np.array([float(c) for c in to_vector(g)])
    if len(xv) != A.shape[1] or len(gv) != A.shape[1]:
        raise DimensionError("point, subgradient and function dimensions differ")
    e = float(to_scalar(eps))
    R = oracle_radius(f, x) if radius is None else float(radius)
    Y = _sample_points(A, b, xv, R, points)
    fy = (Y @ A.T + b).max(axis=1)
    fx = float((A @ xv + b).max())
    if np.any(fy - fx - (Y - xv) @ gv + e < -tol):
        return False
    if rays:
        U = _ray_directions(A.shape[1], points)
        if np.any((U @ A.T).max(axis=1) - U @ gv < -tol):
            return False
    return True


def graph_convexity_check(f: PWLConvexFunction, x, eps1, eps2, t) -> bool:
    """Whether ``(1 - t) D(eps1) + t D(eps2)`` lies inside ``D((1 - t) eps1 + t eps2)``."""
    t = to_scalar(t)
    if sign(t) < 0 or sign(t - 1) > 0:
        raise ValueError("t must lie in [0, 1]")
    e1, e2 = to_scalar(eps1), to_scalar(eps2)
    mix = minkowski_sum(scale(eps_subdiff(f, x, e1), 1 - t), scale(eps_subdiff(f, x, e2), t))
    return contains_set(mix, eps_subdiff(f, x, (1 - t) * e1 + t * e2))


@dataclass(frozen=True)
class LipschitzReport:
    """Outcome of :func:`lipschitz_probe`; unpacks as ``(L_emp, L_bound, violations)``."""

    L_emp: float
    L_bound: float
    violations: int
    pairs: int
    worst: tuple = field(default=(), repr=False)

    def __iter__(self):
        return iter((self.L_emp, self.L_bound, self.violations))


def lipschitz_probe(f: PWLConvexFunction, x, eps, upsilon, n: int = 200, seed: int = 0,
                    tol: float = 1e-9, resolution: int = 10 ** 6) -> LipschitzReport:
    """Sample Hausdorff ratios of ``D`` on ``[eps - upsilon, eps + upsilon]``.

    ``L_bound = ||D(eps + upsilon) + (-D(0))|| / (eps - upsilon)``.  A pair is
    a violation when its distance exceeds ``L_bound * |eps' - eps''| + tol``.
    Levels are drawn from a grid of ``resolution`` steps so they stay exact
    in rational mode; equal pairs are skipped.
    """
    e, u = to_scalar(eps), to_scalar(upsilon)
    if sign(u) <= 0 or sign(u - e) >= 0:
        raise ValueError("need 0 < upsilon < eps")
    r = random.Random(seed)
    lo, width = e - u, 2 * u

    def level():
        k = r.randint(0, resolution)
        if arith.exact():
            return lo + width * Fraction(k, resolution)
        return lo + width * k / resolution

    D0 = eps_subdiff(f, x, 0)
    bound = norm(minkowski_sum(eps_subdiff(f, x, e + u), scale(D0, -1))) / float(e - u)
    cache = {}

    def D(level_):
        if level_ not in cache:
            cache[level_] = eps_subdiff(f, x, level_)
        return cache[level_]

    L_emp, violations, used, worst = 0.0, 0, 0, ()
    for _ in range(n):
        a, c = level(), level()
        delta = abs(float(a - c))
        if sign(a - c) == 0:
            continue
        used += 1
        dist = hausdorff(D(a), D(c))
        ratio = dist / delta
        if ratio > L_emp:
            L_emp, worst = ratio, (a, c)
        if dist > bound * delta + tol:
            violations += 1
    return LipschitzReport(L_emp, bound, violations, used, worst)
