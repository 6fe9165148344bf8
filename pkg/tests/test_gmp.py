"""Formal differences X / Y and their minimal elements."""

import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from convexdiff import (Collection, ConvergenceError, DimensionError, Polytope, arith,
                        collection_norm, contains_point, contains_set, feasible, is_equivalent,
                        is_zero, make, minimal_element, minimal_oracle, scale,
                        support_value)
from convexdiff import gmp
from convexdiff.geometry import direction_grid, norm_sq

from conftest import polygons, sq

A = Polytope([(0, 0), (1, 0), (F(1, 2), 1)])
B = Polytope([(0, 0), (1, 0)])
TRI_EDGE = make(A, B)
ORIGIN = Polytope([(0, 0)])
TRI = Polytope([(0, 0), (3, 1), (1, 2)])


def is_edge_segment(Z):
    # minimal elements of A / B join the origin to a point (a, 1) with |a| <= 1/2:
    # pieces for (0,0) and (1,0) meet only at the origin, the apex piece is the
    # segment from (-1/2, 1) to (1/2, 1)
    if len(Z.vertices) != 2:
        return False
    lo, hi = sorted(Z.vertices, key=lambda v: v[1])
    return lo == (0, 0) and hi[1] == 1 and abs(hi[0]) <= F(1, 2)


class TestAlgebra:
    def test_support_triangle_minus_edge(self):
        assert gmp.support(TRI_EDGE, (0, 1)) == 1

    @given(polygons())
    def test_support_trivial_cases(self, X):
        for p in direction_grid(8):
            assert gmp.support(make(X), p) == support_value(X, p)
            assert gmp.support(make(X, X), p) == 0

    def test_embedding(self):
        assert make(A) == Collection(A, ORIGIN)
        assert make(A) + TRI == make(A + TRI, ORIGIN)

    @given(polygons(5), polygons(5))
    def test_add_inverse_pair_is_zero(self, X, Y):
        C = make(X, Y)
        assert is_zero(C + make(Y, X))
        assert is_zero(C + C.inverse())
        assert is_equivalent(C + gmp.zero(2), C)

    @given(polygons(5), polygons(5), polygons(5), polygons(5),
           st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
    def test_support_additive(self, X, Y, Z, W, p):
        C1, C2 = make(X, Y), make(Z, W)
        assert gmp.support(C1 + C2, p) == gmp.support(C1, p) + gmp.support(C2, p)

    @given(polygons(4), polygons(4), polygons(4), polygons(4), polygons(4), polygons(4))
    @settings(max_examples=30)
    def test_commutative_associative(self, X, Y, Z, W, U, V):
        C1, C2, C3 = make(X, Y), make(Z, W), make(U, V)
        assert is_equivalent(C1 + C2, C2 + C1)
        assert is_equivalent((C1 + C2) + C3, C1 + (C2 + C3))

    @given(polygons(5), polygons(5), st.sampled_from([-2, -1, F(-1, 3), 0, F(1, 2), 1, 3]),
           st.tuples(st.integers(-4, 4), st.integers(-4, 4)))
    def test_scale(self, X, Y, a, p):
        C = make(X, Y)
        assert gmp.support(gmp.scale(C, a), p) == gmp.support(C, tuple(a * c for c in p))
        assert is_equivalent(gmp.scale(make(X, Y) + make(Y, X), a),
                             gmp.scale(make(X, Y), a) + gmp.scale(make(Y, X), a))

    def test_scale_examples(self):
        assert gmp.scale(make(A), -1) == make(scale(A, -1), ORIGIN)
        assert gmp.scale(TRI_EDGE, 1) == TRI_EDGE
        assert is_zero(gmp.scale(TRI_EDGE, 0))

    def test_negative_multiple_is_not_the_inverse(self):
        # C + (-1)C = (X - X) / (Y - Y) is not zero, unlike C + (Y / X)
        C = make(A, B)
        assert not is_zero(C + gmp.scale(C, -1))
        assert is_zero(C + C.inverse())
        # hence (1 + (-1))C differs from 1C + (-1)C
        assert not is_equivalent(gmp.scale(C, 0), C + gmp.scale(C, -1))

    @given(polygons(5), polygons(5), polygons(5))
    def test_common_summand(self, X, Y, Z):
        assert is_equivalent(make(X, Y), make(X + Z, Y + Z))

    def test_equivalence_examples(self):
        assert is_equivalent(make(scale(TRI, 2), TRI), make(TRI, ORIGIN))
        seg = Polytope([(-1,), (1,)])
        assert not is_equivalent(make(seg, Polytope([(0,)])), make(Polytope([(0,)]), seg))

    def test_zero_examples(self):
        assert is_zero(make(TRI, TRI))
        almost = sq(0, 1 - F(1, 10 ** 9))
        assert not is_zero(make(sq(0, 1), almost))

    def test_feasible_examples(self):
        assert feasible(TRI + scale(A, -1), make(TRI, A))
        for g in (0, F(1, 4), F(1, 2), 1):
            assert feasible(scale(TRI, 1 - g), make(TRI, scale(TRI, g)))
        assert feasible(ORIGIN, make(A, sq(-1, 2)))
        assert not feasible(ORIGIN, make(sq(-1, 2), A))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            make(A, Polytope([(0,)]))


class TestMinimalElement:
    @pytest.mark.parametrize("t", range(8))
    def test_triangle_minus_edge_segments(self, t):
        rep = minimal_element(TRI_EDGE, (1, F(2 * t - 7, 16)), 64)
        assert rep.certified_feasible and rep.exact_minimal
        assert is_edge_segment(rep.element)
        assert rep.gap == 0

    def test_triangle_minus_edge_frozen_endpoints(self):
        # selectors (1, -1/16) and (1, 1/16) give the grid-resolved endpoints below
        ends = [max(minimal_element(TRI_EDGE, (1, s), 64).element.vertices, key=lambda v: v[1])
                for s in (F(-1, 16), F(1, 16))]
        assert ends == [(F(1, 16), 1), (F(-2668032, 27088985), 1)]

    @pytest.mark.parametrize("gamma", [0, F(1, 4), F(1, 2), F(3, 4), 1])
    def test_scaled_difference(self, gamma):
        for p in direction_grid(5, 2, 0.4):
            rep = minimal_element(make(TRI, scale(TRI, gamma)), p, 32)
            assert rep.element == scale(TRI, 1 - gamma)

    def test_zero_minus_set_is_a_point(self):
        for p in direction_grid(6, 2, 0.25):
            rep = minimal_element(make(ORIGIN, TRI), p, 16)
            (z,) = rep.element.vertices
            x_star = max(TRI.vertices, key=lambda v: p[0] * v[0] + p[1] * v[1])
            assert z == tuple(-c for c in x_star)

    def test_set_minus_zero_is_the_set(self):
        assert minimal_element(make(TRI), (0, 1), 16).element == TRI

    @given(polygons(6), polygons(6))
    @settings(max_examples=25)
    def test_feasible_and_lower_side(self, X, Y):
        C = make(X, Y)
        rep = minimal_element(C, (3, 1), 16)
        assert rep.certified_feasible and contains_set(X, Y + rep.element)
        assert all(support_value(rep.element, p) >= gmp.support(C, p)
                   for p in direction_grid(32))
        assert rep.gap == 0
        assert contains_set(rep.element, X + scale(Y, -1))

    def test_double_mode(self):
        with arith.arithmetic("double"):
            C = make(Polytope([(0, 0), (1, 0), (0.5, 1)]), Polytope([(0, 0), (1, 0)]))
            rep = minimal_element(C, (1.0, 0.2), 64)
            assert rep.certified_feasible
            assert len(rep.element.vertices) == 2
            assert abs(rep.gap) <= arith.TOL

    def test_three_dimensional_lp_path(self):
        with arith.arithmetic("double"):
            cube = Polytope([(x, y, z) for x in (0., 1.) for y in (0., 1.) for z in (0., 1.)])
            rep = minimal_element(make(cube, scale(cube, 0.5)), (1.0, 0.0, 0.0), 16)
            assert rep.certified_feasible
            assert rep.exact_minimal is None
            assert max(abs(a - b) for u, v in zip(rep.element.vertices,
                                                  scale(cube, 0.5).vertices)
                       for a, b in zip(u, v)) < 1e-6

    def test_one_dimensional(self):
        rep = minimal_element(make(Polytope([(0,), (3,)]), Polytope([(0,), (1,)])), (1,), 8)
        assert rep.element == Polytope([(0,), (2,)])

    def test_sweep_limit_is_reported(self):
        with pytest.raises(ConvergenceError) as info:
            minimal_element(TRI_EDGE, (1, 0), 16, max_sweeps=0)
        assert info.value.partial is not None

    def test_small_grid_rejected(self):
        with pytest.raises(ValueError):
            minimal_element(TRI_EDGE, (1, 0), 4)

    def test_report_json(self):
        js = minimal_element(TRI_EDGE, (1, 0), 16).to_json()
        assert js["element"]["dim"] == 2 and js["exact_minimal"] is True


class TestOracle:
    def test_zero_collection(self):
        assert minimal_oracle(make(TRI, TRI), 8, 4) == [ORIGIN]

    @pytest.mark.parametrize("gamma", [0, F(1, 4), F(1, 2), F(3, 4), 1])
    def test_scaled_difference_single_candidate(self, gamma):
        assert minimal_oracle(make(TRI, scale(TRI, gamma)), 8, 6) == [scale(TRI, 1 - gamma)]

    def test_triangle_minus_edge_candidates(self):
        cands = minimal_oracle(TRI_EDGE, 8, 6)
        # frozen: five candidates at this ladder, the vertical segment among them
        assert len(cands) == 5
        assert Polytope([(0, 0), (0, 1)]) in cands
        assert all(feasible(Z, TRI_EDGE) for Z in cands)
        assert all(contains_point(Z, (0, 0)) for Z in cands)

    def test_extracted_elements_are_not_beaten_by_candidates(self):
        # no oracle candidate is a proper subset of an extracted minimal element
        cands = minimal_oracle(TRI_EDGE, 8, 6)
        for t in range(8):
            Z = minimal_element(TRI_EDGE, (1, F(2 * t - 7, 16)), 64).element
            assert not any(contains_set(K, Z) and K != Z for K in cands)

    def test_budget(self):
        with pytest.raises(gmp.BudgetExceeded):
            minimal_oracle(make(TRI, A), 8, 6, budget=10)

    def test_limits(self):
        with pytest.raises(ValueError):
            minimal_oracle(TRI_EDGE, 32, 6)


class TestNorm:
    @given(polygons())
    @settings(max_examples=20)
    def test_identities(self, X):
        for C in (make(X), make(ORIGIN, X)):
            b = collection_norm(C, 4, 16)
            assert b.lower_sq == b.upper_sq == norm_sq(X)

    def test_zero(self):
        b = collection_norm(make(TRI, TRI), 4, 16)
        assert b.lower_sq == 0
        assert b.upper_sq == norm_sq(TRI + scale(TRI, -1))

    @given(polygons(5), polygons(5))
    @settings(max_examples=20)
    def test_bracket_order(self, X, Y):
        b = collection_norm(make(X, Y), 4, 16)
        assert b.lower_sq <= b.upper_sq
        assert arith.sqrt_le_sum(b.upper_sq, norm_sq(X), norm_sq(Y))

    def test_triangle_minus_edge(self):
        lower, upper = collection_norm(TRI_EDGE, 8, 64)
        assert lower == pytest.approx(math.sqrt(F(5, 4)))
        assert upper == pytest.approx(math.sqrt(F(5, 4)))
