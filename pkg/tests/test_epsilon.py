"""Approximate subdifferentials of max-affine functions."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from convexdiff import (EpsSubdiffQuery, PWLConvexFunction, Polytope, arith, eps_subdiff,
                        eps_subdiff_oracle, evaluate, graph_convexity_check, lipschitz_probe)
from convexdiff.epsilon import gaps, oracle_radius
from convexdiff.geometry import DimensionError, contains_set, direction_grid, support_value

ABS = PWLConvexFunction([((1,), 0), ((-1,), 0)])
SMALL = st.integers(-3, 3).map(lambda k: F(k, 2))


@st.composite
def functions(draw, d=2, max_pieces=5):
    n = draw(st.integers(1, max_pieces))
    return PWLConvexFunction([(tuple(draw(SMALL) for _ in range(d)), draw(SMALL))
                              for _ in range(n)])


def support_by_rays(f, x, eps, p):
    """``inf_{t > 0} (f(x + t p) - f(x) + eps) / t``, exactly.

    Along the ray the quotient is piecewise of the form ``(c + eps) / t + s``
    and attains its infimum at a breakpoint of ``f`` or in the limit
    ``t -> inf``, where it tends to ``max a_i . p``.
    """
    fx = f(x)
    slopes = [sum(a * c for a, c in zip(ai, p)) for ai, _ in f.pieces]
    offs = [sum(a * c for a, c in zip(ai, x)) + b for ai, b in f.pieces]
    best = max(slopes)
    ts = set()
    for i, j in itertools.combinations(range(len(slopes)), 2):
        if slopes[i] != slopes[j]:
            t = (offs[j] - offs[i]) / (slopes[i] - slopes[j])
            if t > 0:
                ts.add(t)
    for t in ts:
        y = tuple(c + t * q for c, q in zip(x, p))
        best = min(best, (f(y) - fx + eps) / t)
    return best


class TestClosedForm:
    @pytest.mark.parametrize("eps, ends", [
        (0, (1, 1)), (F(1, 2), (F(1, 2), 1)), (1, (0, 1)), (2, (-1, 1)), (3, (-1, 1))])
    def test_abs_at_one(self, eps, ends):
        D = eps_subdiff(ABS, (1,), eps)
        assert (min(D.vertices)[0], max(D.vertices)[0]) == ends

    def test_abs_at_zero(self):
        assert eps_subdiff(ABS, (0,), 0) == Polytope([(-1,), (1,)])

    def test_query_object(self):
        assert eps_subdiff(ABS, EpsSubdiffQuery((1,), "1/2")) == eps_subdiff(ABS, (1,), F(1, 2))

    def test_negative_eps(self):
        with pytest.raises(ValueError):
            EpsSubdiffQuery((1,), -1)

    def test_dimension(self):
        with pytest.raises(DimensionError):
            eps_subdiff(ABS, (1, 2), 0)
        with pytest.raises(DimensionError):
            PWLConvexFunction([((1,), 0), ((1, 2), 0)])

    def test_single_piece(self):
        f = PWLConvexFunction([((2, -1), 5)])
        for e in (0, 1, 7):
            assert eps_subdiff(f, (3, 3), e) == Polytope([(2, -1)])

    def test_evaluate(self):
        f = PWLConvexFunction([((1, 0), 0), ((0, 1), 0), ((-1, -1), 0)])
        assert evaluate(f, (0, 0)) == (0, frozenset({0, 1, 2}))
        assert evaluate(f, (2, 1)) == (2, frozenset({0}))
        assert gaps(f, (2, 1)) == [0, 1, 5]

    def test_duplicates_dropped(self):
        assert len(PWLConvexFunction([((1,), 0), ((1,), 0), ((-1,), 0)]).pieces) == 2

    @given(functions(), st.tuples(SMALL, SMALL), st.sampled_from([0, F(1, 4), 1, 3]))
    def test_support_matches_ray_formula(self, f, x, eps):
        D = eps_subdiff(f, x, eps)
        for p in direction_grid(8):
            assert support_value(D, p) == support_by_rays(f, x, eps, p)

    @given(functions(), st.tuples(SMALL, SMALL), SMALL.map(abs), SMALL.map(abs))
    def test_monotone_in_eps(self, f, x, e1, e2):
        lo, hi = sorted((e1, e2))
        assert contains_set(eps_subdiff(f, x, lo), eps_subdiff(f, x, hi))

    @given(functions(d=1, max_pieces=4), SMALL, SMALL.map(abs))
    def test_one_dimensional_interval(self, f, x, eps):
        D = eps_subdiff(f, (x,), eps)
        for p in ((1,), (-1,)):
            assert support_value(D, p) == support_by_rays(f, (x,), eps, p)

    def test_double_mode(self):
        with arith.arithmetic("double"):
            f = PWLConvexFunction([((1.0,), 0.0), ((-1.0,), 0.0)])
            D = eps_subdiff(f, (1.0,), 0.5)
            assert [v[0] for v in D.vertices] == pytest.approx([0.5, 1.0])


class TestOracle:
    def test_abs_endpoints(self):
        for eps in (0, F(1, 2), 1, 2):
            D = eps_subdiff(ABS, (1,), eps)
            lo, hi = min(D.vertices)[0], max(D.vertices)[0]
            assert eps_subdiff_oracle(ABS, (1,), eps, (lo,))
            assert eps_subdiff_oracle(ABS, (1,), eps, (hi,))
            assert not eps_subdiff_oracle(ABS, (1,), eps, (float(lo) - 1e-3,))
            assert not eps_subdiff_oracle(ABS, (1,), eps, (float(hi) + 1e-3,))

    def test_rays_catch_recession(self):
        # without ray checks a gradient just past the recession cone can slip
        # through when eps is large against the box radius
        f = ABS
        big = 10 ** 4
        assert not eps_subdiff_oracle(f, (0,), big, (1.001,))
        assert eps_subdiff_oracle(f, (0,), big, (1.001,), rays=False)

    def test_radius(self):
        assert oracle_radius(ABS, (1,)) == pytest.approx(30.0)

    @given(functions(max_pieces=4), st.tuples(SMALL, SMALL), st.sampled_from([0, F(1, 2), 2]))
    @settings(max_examples=25)
    def test_vertices_pass_outside_fails(self, f, x, eps):
        D = eps_subdiff(f, x, eps)
        for v in D.vertices:
            assert eps_subdiff_oracle(f, x, eps, v, points=21)
        for p in direction_grid(8):
            h = float(support_value(D, p))
            n = sum(float(c) ** 2 for c in p) ** 0.5
            out = tuple(float(c) * (h + 1e-3 * n) / (n * n) for c in p)
            assert not eps_subdiff_oracle(f, x, eps, out, points=21)


class TestProbes:
    @given(functions(max_pieces=4), st.tuples(SMALL, SMALL), SMALL.map(abs), SMALL.map(abs),
           st.sampled_from([0, F(1, 3), F(1, 2), 1]))
    def test_graph_convexity(self, f, x, e1, e2, t):
        assert graph_convexity_check(f, x, e1, e2, t)

    def test_graph_convexity_rejects_t(self):
        with pytest.raises(ValueError):
            graph_convexity_check(ABS, (1,), 0, 1, 2)

    def test_lipschitz_abs(self):
        rep = lipschitz_probe(ABS, (1,), 1, F(1, 2), n=200, seed=0)
        L_emp, L_bound, violations = rep
        assert violations == 0 and L_bound == pytest.approx(3.0)
        assert L_emp == pytest.approx(1.0)
        assert rep.pairs == 200

    def test_lipschitz_deterministic(self):
        f = PWLConvexFunction([((1, 0), 0), ((0, 1), 1), ((-1, -1), F(1, 2))])
        a = lipschitz_probe(f, (0, 0), 1, F(1, 2), n=50, seed=4)
        assert a == lipschitz_probe(f, (0, 0), 1, F(1, 2), n=50, seed=4)

    @pytest.mark.parametrize("u", [0, 1, 2])
    def test_lipschitz_rejects_upsilon(self, u):
        with pytest.raises(ValueError):
            lipschitz_probe(ABS, (1,), 1, u)
