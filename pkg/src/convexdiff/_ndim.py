"""Floating-point helpers for polytopes in dimension 3 and 4.

Everything here works on numpy arrays and is only used behind the exact
planar code paths in :mod:`convexdiff.geometry`.
"""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull

EPS = 1e-9


def affine_hull(points: np.ndarray):
    """Return ``(origin, basis)`` with orthonormal rows spanning the affine hull."""
    origin = points.mean(axis=0)
    centered = points - origin
    if len(points) == 1:
        return origin, np.zeros((0, points.shape[1]))
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = max(1.0, float(np.abs(points).max()))
    rank = int((s > EPS * scale * 10).sum())
    return origin, vt[:rank]


def extreme_indices(points: np.ndarray) -> list[int]:
    """Indices of the extreme points of a finite point set."""
    origin, basis = affine_hull(points)
    k = len(basis)
    if k == 0:
        return [0]
    local = (points - origin) @ basis.T
    if k == 1:
        return sorted({int(local[:, 0].argmin()), int(local[:, 0].argmax())})
    return sorted(int(i) for i in ConvexHull(local).vertices)


def hrep(vertices: np.ndarray):
    """Inequalities ``A z <= b`` and equalities ``E z = f`` describing the hull."""
    d = vertices.shape[1]
    origin, basis = affine_hull(vertices)
    k = len(basis)
    if k:
        comp = np.linalg.svd(basis, full_matrices=True)[2][k:]
    else:
        comp = np.eye(d)
    E = comp
    f = comp @ origin
    if k == 0:
        return np.zeros((0, d)), np.zeros(0), E, f
    local = (vertices - origin) @ basis.T
    if k == 1:
        lo, hi = local[:, 0].min(), local[:, 0].max()
        A = np.vstack([basis[0], -basis[0]])
        b = np.array([hi + basis[0] @ origin, -lo - basis[0] @ origin])
        return A, b, E, f
    hull = ConvexHull(local)
    normals = hull.equations[:, :-1]
    offsets = -hull.equations[:, -1]
    A = normals @ basis
    b = offsets + A @ origin
    return A, b, E, f


def vertex_enumerate(A, b, E, f, tol: float = 1e-7) -> np.ndarray:
    """Brute-force vertex enumeration of ``{A z <= b, E z = f}``."""
    d = A.shape[1] if A.size else E.shape[1]
    if len(E):
        z0, *_ = np.linalg.lstsq(E, f, rcond=None)
        if np.abs(E @ z0 - f).max() > tol:
            return np.zeros((0, d))
        _, s, vt = np.linalg.svd(E, full_matrices=True)
        rank = int((s > EPS).sum())
        null = vt[rank:]
    else:
        z0 = np.zeros(d)
        null = np.eye(d)
    k = len(null)
    if k == 0:
        if len(A) and (A @ z0 - b).max() > tol:
            return np.zeros((0, d))
        return z0[None, :]
    Ar = A @ null.T
    br = b - A @ z0
    found = []
    for rows in itertools.combinations(range(len(Ar)), k):
        M = Ar[list(rows)]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        u = np.linalg.solve(M, br[list(rows)])
        if (Ar @ u - br).max() <= tol:
            found.append(z0 + null.T @ u)
    if not found:
        return np.zeros((0, d))
    pts = np.array(found)
    keep = []
    for p in pts:
        if all(np.abs(p - q).max() > tol for q in keep):
            keep.append(p)
    return np.array(keep)


def lp_min(c, A, b, E, f):
    """Minimum of ``c.z`` over ``{A z <= b, E z = f}``; ``None`` when infeasible."""
    res = linprog(c, A_ub=A if len(A) else None, b_ub=b if len(A) else None,
                  A_eq=E if len(E) else None, b_eq=f if len(E) else None,
                  bounds=[(None, None)] * len(c), method="highs")
    if res.status != 0:
        return None
    return float(res.fun)


def in_hull(vertices: np.ndarray, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Convex-combination feasibility LP."""
    n = len(vertices)
    A_eq = np.vstack([vertices.T, np.ones(n)])
    b_eq = np.append(x, 1.0)
    res = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
    if res.status != 0:
        return False
    return float(np.abs(A_eq @ res.x - b_eq).max()) <= max(tol, 1e-7)


def distance_to_hull(vertices: np.ndarray, x: np.ndarray) -> float:
    """Euclidean distance from ``x`` to the hull of ``vertices`` (SLSQP)."""
    n = len(vertices)
    if in_hull(vertices, x):
        return 0.0
    lam0 = np.full(n, 1.0 / n)
    res = minimize(lambda lam: float(np.sum((lam @ vertices - x) ** 2)), lam0,
                   jac=lambda lam: 2 * vertices @ (lam @ vertices - x),
                   bounds=[(0, 1)] * n,
                   constraints=[{"type": "eq", "fun": lambda lam: lam.sum() - 1,
                                 "jac": lambda lam: np.ones(n)}],
                   method="SLSQP", options={"ftol": 1e-14, "maxiter": 500})
    return float(np.sqrt(max(res.fun, 0.0)))
