"""Single-set differences: the covering difference and classical erosion.

``cover_diff(X, Y) = {z : X in Y + z}`` collects the translations of ``Y`` that
cover ``X``; ``erode_diff(X, Y) = {z : z + Y in X}`` is the classical erosion.
Both return :data:`~convexdiff.geometry.EMPTY` rather than raising when no
such translation exists.
"""

from __future__ import annotations

from .geometry import (EMPTY, Polytope, _check, contains_point, intersect, scale,
                       translate)

__all__ = ["cover_diff", "erode_diff", "reflected_cover_form", "compare_intersection_forms"]


def _intersect_all(pieces):
    acc = pieces[0]
    for piece in pieces[1:]:
        acc = intersect(acc, piece)
        if acc is EMPTY:
            return EMPTY
    return acc


def cover_diff(X: Polytope, Y: Polytope):
    """All ``z`` with ``X`` contained in ``Y + z``.

    Computed as the intersection over vertices ``v`` of ``X`` of ``v - Y``.
    """
    _check(X, Y)
    negY = scale(Y, -1)
    return _intersect_all([translate(negY, v) for v in X.vertices])


def erode_diff(X: Polytope, Y: Polytope):
    """All ``z`` with ``z + Y`` contained in ``X``: the intersection of ``X - y``."""
    _check(X, Y)
    return _intersect_all([translate(X, tuple(-c for c in y)) for y in Y.vertices])


def reflected_cover_form(X: Polytope, Y: Polytope):
    """The intersection of the translates ``Y - x`` over vertices ``x`` of ``X``.

    Since ``Y - x = -(x - Y)`` this is always ``-cover_diff(X, Y)``, the mirror
    image of the covering difference; the two agree only when that set is
    symmetric about the origin.
    """
    _check(X, Y)
    return _intersect_all([translate(Y, tuple(-c for c in x)) for x in X.vertices])


def compare_intersection_forms(X: Polytope, Y: Polytope) -> dict:
    """Compare ``cover_diff`` with :func:`reflected_cover_form` by membership.

    Returns both sets and, when they differ, a witness point belonging to one
    of them but violating the covering definition (or vice versa).
    """
    direct = cover_diff(X, Y)
    reflected = reflected_cover_form(X, Y)
    witness = None
    if direct is EMPTY and reflected is EMPTY:
        agree = True
    elif direct is EMPTY or reflected is EMPTY:
        agree = False
        witness = (reflected if direct is EMPTY else direct).vertices[0]
    else:
        agree = direct.vertices == reflected.vertices
        if not agree:
            for v in reflected.vertices:
                if not contains_point(direct, v):
                    witness = v
                    break
            else:
                witness = next(v for v in direct.vertices if not contains_point(reflected, v))
    if witness is not None:
        covers = all(contains_point(translate(Y, witness), x) for x in X.vertices)
    else:
        covers = None
    return {"cover_diff": direct, "reflected": reflected, "agree": agree,
            "witness": witness, "witness_covers": covers}
