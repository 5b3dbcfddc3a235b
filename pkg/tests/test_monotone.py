from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stieltjes import (
    CompositionError,
    DomainError,
    MonotoneFn,
    compose,
    eval_at,
    flat_levels,
    left_inverse,
    right_inverse,
    selector_inverse,
)
from stieltjes.generate import random_monotone, random_outer

from conftest import fix1_M, fix1_N, fix2_M

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def triple(F, x):
    return tuple(eval_at(F, x, s) for s in ("left", "value", "right"))


def brute_inverse(M, y, mesh=1e-3, which="left"):
    """inf{x : y <= M(x)} (or sup{x : M(x) <= y}) scanned on a fine mesh."""
    lo, hi = float(M.lo), float(M.hi)
    xs = np.union1d(np.linspace(lo, hi, int((hi - lo) / mesh) + 1), [float(x) for x in M.xs])
    vals = np.array([float(M(Fraction(x))) for x in xs])
    if which == "left":
        return xs[np.argmax(vals >= y)]
    return xs[len(vals) - 1 - np.argmax((vals <= y)[::-1])]


class TestEval:
    def test_jump_triple_read_directly(self):
        assert triple(fix2_M(), 1) == (1, Fraction(5, 4), Fraction(3, 2))

    @pytest.mark.parametrize("side", ["left", "value", "right"])
    def test_identity(self, side):
        assert eval_at(MonotoneFn.identity(0, 1), 0.3, side) == Fraction(0.3)

    def test_endpoint_conventions(self):
        M = fix2_M()
        assert M.left(0) == M(0) == 0
        assert M.right(2) == M(2) == Fraction(5, 2)

    def test_outside_domain(self):
        with pytest.raises(DomainError):
            fix2_M()(2.5)

    def test_bad_side(self):
        with pytest.raises(ValueError):
            fix2_M().eval_at(1, "middle")


class TestConstruction:
    def test_degenerate_domain_rejected(self):
        with pytest.raises(ValueError):
            MonotoneFn([(1, 0, 0, 0)])
        with pytest.raises(ValueError):
            MonotoneFn([(1, 0, 0, 0), (1, 1, 1, 1)])

    def test_reversed_domain_rejected(self):
        with pytest.raises(ValueError):
            MonotoneFn.continuous([1, 0], [0, 1])

    @pytest.mark.parametrize(
        "bps",
        [
            [(0, 0, 0, 0), (1, 2, 1, 3), (2, 4, 4, 4)],  # value below left
            [(0, 0, 0, 0), (1, 1, 1, 0.5), (2, 4, 4, 4)],  # right below value
            [(0, 0, 0, 1), (1, 0.5, 1, 1), (2, 4, 4, 4)],  # decreasing segment
            [(0, -1, 0, 0), (2, 4, 4, 4)],  # left limit at lo
            [(0, 0, 0, 0), (2, 4, 4, 5)],  # right limit at hi
        ],
    )
    def test_invalid(self, bps):
        with pytest.raises(ValueError):
            MonotoneFn(bps)

    def test_constant_is_legal(self):
        C = MonotoneFn.constant(2, 0, 1)
        assert C(0.5) == 2
        H = flat_levels(C)
        assert [tuple(lv) for lv in H] == [(2, 0, 1)]

    def test_from_segments_checks_consistency(self):
        bps = [(0, 0, 0, 0), (1, 1, 1, 1)]
        MonotoneFn.from_segments(bps, [("linear", 1, 0)])
        with pytest.raises(ValueError):
            MonotoneFn.from_segments(bps, [("linear", 2, 0)])
        with pytest.raises(ValueError):
            MonotoneFn.from_segments(bps, [("constant", 0, 0)])

    def test_simplify_drops_idle_breakpoints(self):
        F = MonotoneFn.continuous([0, 1, 2], [0, 1, 2]).simplify()
        assert F.xs == (0, 2)

    def test_step(self):
        S = MonotoneFn.step(0, 2, 1, 0.5, closed=False)
        assert triple(S, 1) == (0, 0, Fraction(1, 2))
        S = MonotoneFn.step(0, 2, 1, 0.5, closed=True)
        assert triple(S, 1) == (0, Fraction(1, 2), Fraction(1, 2))

    def test_difference_must_stay_increasing(self):
        with pytest.raises(ValueError):
            MonotoneFn.identity(0, 1) - MonotoneFn.continuous([0, 1], [0, 2])


class TestCompose:
    def test_identity_cases(self):
        M = fix2_M()
        assert compose(MonotoneFn.identity(0, 2.5), M) == M
        N = fix1_N()
        assert compose(N, MonotoneFn.identity(0, 2)) == N

    def test_fix1(self):
        L = compose(fix1_N(), fix1_M())
        assert triple(L, 2) == (Fraction(3, 2), Fraction(3, 2), 2)
        assert triple(L, 1) == (1, Fraction(3, 2), Fraction(3, 2))
        assert L(0.5) == Fraction(0.5) and L(2.5) == Fraction(2.5)
        assert L(1.7) == Fraction(3, 2)

    def test_fix1_against_mesh_sampling(self):
        # one-sided limits at x = 2 approached by direct evaluation of N(M(x))
        M, N = fix1_M(), fix1_N()
        for eps in (1e-3, 1e-6):
            e = Fraction(eps)
            assert abs(float(N(M(2 - e))) - 1.5) < 2 * eps
            assert abs(float(N(M(2 + e))) - 2.0) < 2 * eps

    def test_fix1r(self):
        L = compose(fix1_N(2), fix1_M())
        assert triple(L, 1) == (1, 2, 2)
        assert triple(L, 2) == (2, 2, 2)
        assert L(1.5) == 2

    def test_range_violation(self):
        with pytest.raises(CompositionError):
            compose(MonotoneFn.identity(0, 1), fix1_M())

    def test_crossing_inserted(self):
        # M rises through a jump of N at y = 1/2
        N = MonotoneFn([(0, 0, 0, 0), (0.5, 0.5, 0.75, 1), (1, 1.5, 1.5, 1.5)])
        L = compose(N, MonotoneFn.continuous([0, 1], [0, 1]))
        assert triple(L, 0.5) == (Fraction(1, 2), Fraction(3, 4), 1)


class TestInverses:
    def test_linear(self):
        X = left_inverse(MonotoneFn.continuous([0, 1], [0, 2]))
        Xi = right_inverse(MonotoneFn.continuous([0, 1], [0, 2]))
        for y in (0, 0.3, 1, 2):
            assert X(y) == Xi(y) == Fraction(y) / 2

    def test_fix1(self):
        M = fix1_M()
        X, Xi = left_inverse(M), right_inverse(M)
        assert X(1) == 1 and Xi(1) == 2
        for y in (0, 0.25, 0.5, 1):
            assert X(y) == Fraction(y)
        for y in (1.25, 1.5, 2):
            assert X(y) == Fraction(y) + 1
        assert X.is_left_continuous() and Xi.is_right_continuous()

    def test_fix2_jump_becomes_flat(self):
        X = left_inverse(fix2_M())
        for y in (1, 1.1, 1.25, 1.5):
            assert X(y) == 1

    @pytest.mark.parametrize("M", [fix1_M(), fix2_M()])
    def test_against_brute_force_scan(self, M):
        X, Xi = left_inverse(M), right_inverse(M)
        for y in np.linspace(float(M.range[0]), float(M.range[1]), 41):
            assert abs(float(X(y)) - brute_inverse(M, y)) <= 1.01e-3
            assert abs(float(Xi(y)) - brute_inverse(M, y, which="right")) <= 1.01e-3

    def test_selector(self):
        M = fix1_M()
        assert selector_inverse(M, 0) == left_inverse(M)
        assert selector_inverse(M, 1) == right_inverse(M)
        W = selector_inverse(M, 0.5)
        assert W(1) == Fraction(3, 2)
        assert W(0.5) == Fraction(1, 2) and W(1.5) == Fraction(5, 2)

    def test_selector_strict(self):
        M = MonotoneFn.continuous([0, 1, 2], [0, 1, 3])
        assert selector_inverse(M, 0.37) == left_inverse(M) == right_inverse(M)

    @pytest.mark.parametrize("theta", [-0.1, 1.5])
    def test_selector_theta_range(self, theta):
        with pytest.raises(ValueError):
            selector_inverse(fix1_M(), theta)


class TestFlatLevels:
    def test_strict(self):
        assert not flat_levels(fix2_M())

    def test_fix1(self):
        assert [tuple(lv) for lv in flat_levels(fix1_M())] == [(1, 1, 2)]

    def test_merges_adjacent_constant_pieces(self):
        M = MonotoneFn([(0, 0, 0, 0), (1, 1, 1, 1), (2, 1, 1, 1), (3, 1, 1, 2), (4, 3, 3, 3)])
        assert [tuple(lv) for lv in flat_levels(M)] == [(1, 1, 3)]

    def test_jump_into_flat(self):
        # value at x = 1 is below the flat level, so M^{-1}[{1}] = (1, 2]
        M = MonotoneFn([(0, 0, 0, 0), (1, 0, 0, 1), (2, 1, 1, 1), (3, 2, 2, 2)])
        assert [tuple(lv) for lv in flat_levels(M)] == [(0, 0, 1), (1, 1, 2)]


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_inverse_characterization(seed):
    """X(y) <= x exactly when y <= M(x+), for x in [lo, hi)."""
    rng = np.random.default_rng(seed)
    M = random_monotone(rng)
    X = left_inverse(M)
    ys = set(M.range) | {v for b in M.breakpoints for v in b[1:]}
    ys |= {Fraction(v) for v in rng.uniform(float(M.range[0]), float(M.range[1]), 20)}
    xs = set(M.xs[:-1]) | set(X(y) for y in ys if X(y) < M.hi)
    xs |= {Fraction(v) for v in rng.uniform(float(M.lo), float(M.hi), 20)}
    for y in ys:
        for x in xs:
            if x < M.hi:
                assert (X(y) <= x) == (y <= M.right(x))


@settings(max_examples=60, deadline=None)
@given(seed=seeds, theta=st.fractions(min_value=0, max_value=1))
def test_selector_between_inverses(seed, theta):
    M = random_monotone(np.random.default_rng(seed))
    X, Xi, W = left_inverse(M), right_inverse(M), selector_inverse(M, theta)
    H = set(flat_levels(M).ys)
    pts = set(X.xs) | set(Xi.xs) | {Fraction(v) for v in np.linspace(float(X.lo), float(X.hi), 37)}
    for y in pts:
        assert X(y) <= W(y) <= Xi(y)
        if y not in H:
            assert X(y) == Xi(y)
        else:
            lv = next(lv for lv in flat_levels(M) if lv.y == y)
            assert (X(y), Xi(y)) == (lv.x_left, lv.x_right)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_compose_pointwise_exact(seed):
    rng = np.random.default_rng(seed)
    M = random_monotone(rng)
    N = random_outer(rng, M)
    L = compose(N, M)
    xs = set(M.xs) | set(L.xs) | {Fraction(v) for v in rng.uniform(float(M.lo), float(M.hi), 50)}
    for x in xs:
        assert L(x) == N(M(x))


@settings(max_examples=40, deadline=None)
@given(seed=seeds)
def test_double_inverse_on_strict_continuous(seed):
    rng = np.random.default_rng(seed)
    M = random_monotone(rng, continuous=True, strictly_increasing=True)
    back = left_inverse(left_inverse(M))
    for x in rng.uniform(float(M.lo), float(M.hi), 30):
        assert back(x) == M(x)


@settings(max_examples=60, deadline=None)
@given(seed=seeds)
def test_constructions_are_monotone(seed):
    rng = np.random.default_rng(seed)
    M = random_monotone(rng)
    N = random_outer(rng, M)
    for G in (M, N, compose(N, M), left_inverse(M), right_inverse(M),
              selector_inverse(M, Fraction(1, 3))):
        xs = sorted({Fraction(v) for v in rng.uniform(float(G.lo), float(G.hi), 100)} | set(G.xs))
        vals = [G(x) for x in xs]
        assert all(a <= b for a, b in zip(vals, vals[1:]))
