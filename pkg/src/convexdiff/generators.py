"""Seeded random instances for property sweeps.

All coordinates are small-denominator rationals so that rational-mode runs
stay fast and reproducible across platforms.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .arith import to_scalar
from .geometry import Polytope, scale

__all__ = ["random_polygon", "random_nested_pair", "random_max_affine", "rng"]


def rng(seed: int) -> random.Random:
    return random.Random(seed)


def _coord(r: random.Random, box, denominator):
    return to_scalar(Fraction(r.randint(-box * denominator, box * denominator), denominator))


def random_polygon(r: random.Random, max_vertices: int = 8, box: int = 2,
                   denominator: int = 8, dim: int = 2) -> Polytope:
    """Hull of 3..max_vertices random points in ``[-box, box]^dim``."""
    n = r.randint(min(3, max_vertices), max_vertices)
    return Polytope([tuple(_coord(r, box, denominator) for _ in range(dim)) for _ in range(n)])


def random_nested_pair(r: random.Random, max_vertices: int = 8, box: int = 2,
                       denominator: int = 8):
    """``(X, Y)`` with ``Y`` a subset of ``X``: ``Y`` is the hull of points inside ``X``."""
    X = random_polygon(r, max_vertices, box, denominator)
    k = r.randint(1, max_vertices)
    pts = []
    for _ in range(k):
        w = [Fraction(r.randint(0, 4)) for _ in X.vertices]
        tot = sum(w)
        if tot == 0:
            w[0] = tot = Fraction(1)
        pts.append(tuple(sum(wi * v[j] for wi, v in zip(w, X.vertices)) / tot
                         for j in range(X.dim)))
    return X, Polytope(pts)


def random_max_affine(r: random.Random, dim: int = 2, max_pieces: int = 6, box: int = 2,
                      denominator: int = 4):
    """Random max-affine function with 1..max_pieces pieces."""
    from .epsilon import PWLConvexFunction
    n = r.randint(1, max_pieces)
    pieces = [([_coord(r, box, denominator) for _ in range(dim)], _coord(r, box, denominator))
              for _ in range(n)]
    return PWLConvexFunction(pieces)


def shrink(X: Polytope, factor) -> Polytope:
    return scale(X, factor)
