"""Exact differences of convex polytopes.

Single-set differences (covering difference and erosion) live in
:mod:`.setdiff`.  Formal differences ``X / Y``, whose members are the
inclusion-minimal sets ``Z`` with ``X`` inside ``Y + Z``, live in :mod:`.gmp`,
and approximate subdifferentials of max-affine functions in :mod:`.epsilon`.

Planar work is exact by default (rational arithmetic); see :mod:`.arith`.
"""

from . import arith
from .arith import arithmetic, get_mode, set_mode
from .epsilon import (EpsSubdiffQuery, LipschitzReport, PWLConvexFunction, eps_subdiff,
                      eps_subdiff_oracle, evaluate, graph_convexity_check, lipschitz_probe)
from .geometry import (EMPTY, DimensionError, EmptySet, Halfspace, Polytope, ball_deficiency,
                       contains_point, contains_set, direction_grid, halfspaces, hausdorff,
                       hausdorff_inclusion, hormander_distance, hull, intersect,
                       intersect_halfspaces, minkowski_sum, norm, same_set, scale, support,
                       support_value, translate, unit_ball)
from .gmp import (BudgetExceeded, Collection, ConvergenceError, MinimalElementReport,
                  NormBracket, collection_norm, feasible, is_equivalent, is_zero, make,
                  minimal_element, minimal_oracle)
from .setdiff import compare_intersection_forms, cover_diff, erode_diff
from .svg import render_svg

__version__ = "0.1.0"

__all__ = [
    "arith",
    "arithmetic",
    "get_mode",
    "set_mode",
    "EpsSubdiffQuery",
    "LipschitzReport",
    "PWLConvexFunction",
    "eps_subdiff",
    "eps_subdiff_oracle",
    "evaluate",
    "graph_convexity_check",
    "lipschitz_probe",
    "EMPTY",
    "DimensionError",
    "EmptySet",
    "Halfspace",
    "Polytope",
    "ball_deficiency",
    "contains_point",
    "contains_set",
    "direction_grid",
    "halfspaces",
    "hausdorff",
    "hausdorff_inclusion",
    "hormander_distance",
    "hull",
    "intersect",
    "intersect_halfspaces",
    "minkowski_sum",
    "norm",
    "same_set",
    "scale",
    "support",
    "support_value",
    "translate",
    "unit_ball",
    "BudgetExceeded",
    "Collection",
    "ConvergenceError",
    "MinimalElementReport",
    "NormBracket",
    "collection_norm",
    "feasible",
    "is_equivalent",
    "is_zero",
    "make",
    "minimal_element",
    "minimal_oracle",
    "compare_intersection_forms",
    "cover_diff",
    "erode_diff",
    "render_svg",
]
