import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import stats

from goupillaud.errors import BadLevel, BadWindow, InvalidGrid, NonPositiveDrift, OutOfRange, OutOfWindow
from goupillaud.levy_paths import (
    GridPath,
    JumpPath,
    SubordinatorSpec,
    coarsen,
    evaluate,
    generalized_inverse,
    increments_at_level,
    left_limit,
    make_rng,
    replica_seed,
    sample_compound_poisson,
    sample_gamma_grid,
    sample_path,
)

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def test_spec_rejects_nonpositive_drift():
    with pytest.raises(NonPositiveDrift):
        SubordinatorSpec.compound_poisson(1.0, 1.0, 0.0)
    with pytest.raises(NonPositiveDrift):
        SubordinatorSpec.gamma(1.0, 1.0, -1.0)


@pytest.mark.parametrize("window", [(0.5, 2.0), (-2.0, -0.1), (1.0, 1.0), (2.0, -2.0)])
def test_bad_windows(poisson_spec, window):
    with pytest.raises(BadWindow):
        sample_compound_poisson(poisson_spec, window, 1)


def test_drift_only_path_has_no_jumps():
    p = sample_compound_poisson(SubordinatorSpec.drift_only(1.0), (-3.0, 5.0), 7)
    assert p.n_jumps == 0
    t = np.linspace(-3, 5, 17)
    np.testing.assert_array_equal(evaluate(p, t), t)


def test_sampling_is_deterministic(poisson_spec, gamma_spec):
    a = sample_compound_poisson(poisson_spec, (-2, 2), 99)
    b = sample_compound_poisson(poisson_spec, (-2, 2), 99)
    np.testing.assert_array_equal(a.times, b.times)
    g1 = sample_gamma_grid(gamma_spec, 5, (-32, 64), 3)
    g2 = sample_gamma_grid(gamma_spec, 5, (-32, 64), 3)
    np.testing.assert_array_equal(g1.increments, g2.increments)


def test_poisson_jump_count_mean(poisson_spec):
    counts = np.array([sample_compound_poisson(poisson_spec, (-2.0, 2.0), s).n_jumps
                       for s in range(10_000)])
    se = math.sqrt(4.0 / counts.size)
    assert abs(counts.mean() - 4.0) < 3 * se


def test_poisson_jump_times_uniform_and_subinterval_counts(poisson_spec):
    paths = [sample_compound_poisson(poisson_spec, (-2.0, 2.0), s) for s in range(2000)]
    times = np.concatenate([p.times for p in paths])
    assert stats.kstest(times, stats.uniform(-2.0, 4.0).cdf).pvalue > 1e-3
    # count on [0, 1) has mean 1
    sub = np.array([np.count_nonzero((p.times >= 0) & (p.times < 1)) for p in paths])
    assert abs(sub.mean() - 1.0) < 3 * math.sqrt(1.0 / sub.size)


def test_poisson_jumps_have_size_one(poisson_spec):
    p = sample_compound_poisson(poisson_spec, (-2.0, 2.0), 5)
    assert p.n_jumps > 0
    jumps = evaluate(p, p.times) - left_limit(p, p.times)
    np.testing.assert_allclose(jumps, 1.0, rtol=0, atol=1e-14)


def test_gamma_unit_increment_moments(gamma_spec):
    draws = np.array([sample_gamma_grid(gamma_spec, 0, (0, 1), s).increment(1) - 1.0
                      for s in range(10_000)])
    n = draws.size
    assert abs(draws.mean() - 1.0) < 3 / math.sqrt(n)
    # Var of the sample variance of Exp(1): (mu4 - sigma^4) / n = 8 / n
    assert abs(draws.var(ddof=1) - 1.0) < 3 * math.sqrt(8.0 / n)


def test_gamma_increments_exceed_drift_share(gamma_spec):
    g = sample_gamma_grid(gamma_spec, 3, (0, 8), 11)
    assert g.increments.size == 8
    assert np.all(g.increments > 1.0 / 8)


def test_gamma_grid_rejects_bad_input(gamma_spec):
    with pytest.raises(BadLevel):
        sample_gamma_grid(gamma_spec, -1, (0, 4), 1)
    with pytest.raises(BadWindow):
        sample_gamma_grid(gamma_spec, 2, (1, 4), 1)


def test_coarsen_is_exact_block_sum(gamma_spec):
    g = sample_gamma_grid(gamma_spec, 4, (-32, 48), 17)
    c = coarsen(g, 2)
    inc = g.increments
    expected = [inc[i] + inc[i + 1] + inc[i + 2] + inc[i + 3] for i in range(0, inc.size, 4)]
    assert c.level == 2 and (c.k_lo, c.k_hi) == (-8, 12)
    np.testing.assert_array_equal(c.increments, expected)


def test_coarsen_examples(jump_path):
    g = GridPath(2, 0, 4, [1.0, 1.0, 1.0, 1.0])
    np.testing.assert_array_equal(coarsen(g, 1).increments, [2.0, 2.0])
    g1 = increments_at_level(jump_path, 1, (0, 2))
    np.testing.assert_array_equal(g1.increments, [2.5, 0.5])
    assert coarsen(g1, 0).increments.tolist() == [3.0] == [evaluate(jump_path, 1.0)]
    assert coarsen(g1, 1) is g1
    with pytest.raises(BadLevel):
        coarsen(g1, 2)
    with pytest.raises(BadWindow):
        coarsen(GridPath(1, -1, 2, [1.0, 1.0, 1.0]), 0)


def test_evaluate_examples(jump_path, two_jump_path):
    assert evaluate(jump_path, 0.25) == 0.25
    assert evaluate(jump_path, 0.5) == 2.5
    assert evaluate(jump_path, -1.5) == -1.5
    assert left_limit(jump_path, 0.5) == 0.5
    assert left_limit(jump_path, 0.3) == evaluate(jump_path, 0.3)
    assert left_limit(two_jump_path, 0.75) == 2.75


def test_negative_time_jumps_subtract():
    p = JumpPath(1.0, [-0.5], [2.0], -1.0, 1.0)
    assert evaluate(p, 0.0) == 0.0
    assert evaluate(p, -0.5) == -0.5        # (t, 0] excludes the jump at t itself
    assert evaluate(p, -0.6) == pytest.approx(-2.6)
    assert left_limit(p, -0.5) == pytest.approx(-2.5)


def test_generalized_inverse_examples(jump_path):
    assert generalized_inverse(jump_path, 1.0) == 0.5
    assert generalized_inverse(jump_path, 2.5) == 0.5
    assert generalized_inverse(jump_path, 0.5) == 0.5
    assert generalized_inverse(jump_path, 0.25) == 0.25
    assert generalized_inverse(jump_path, 2.75) == 0.75
    drift = JumpPath(2.0, [], [], -1.0, 1.0)
    assert generalized_inverse(drift, 1.0) == 0.5


def test_out_of_window_and_range(jump_path):
    with pytest.raises(OutOfWindow):
        evaluate(jump_path, 2.5)
    with pytest.raises(OutOfWindow):
        left_limit(jump_path, -3.0)
    lo, hi = jump_path.x_range()
    with pytest.raises(OutOfRange):
        generalized_inverse(jump_path, hi + 1e-9)
    with pytest.raises(OutOfRange):
        generalized_inverse(jump_path, lo - 1.0)


def test_increments_at_level(jump_path):
    g = increments_at_level(jump_path, 1, (0, 2))
    assert g.increments.tolist() == [2.5, 0.5]
    drift = JumpPath(1.0, [], [], -2.0, 2.0)
    for n in range(6):
        g = increments_at_level(drift, n)
        assert np.all(g.increments == 2.0 ** -n)
    with pytest.raises(OutOfWindow):
        increments_at_level(jump_path, 1, (0, 6))
    with pytest.raises(BadLevel):
        increments_at_level(jump_path, -1)


def test_increments_refine_pairwise(poisson_spec):
    p = sample_compound_poisson(poisson_spec, (-3.0, 3.0), 2)
    for n in range(6):
        coarse = increments_at_level(p, n).increments
        fine = increments_at_level(p, n + 1).increments
        np.testing.assert_allclose(coarse, fine[0::2] + fine[1::2], rtol=2.0 ** -40)


def test_grid_path_invariants():
    g = GridPath(1, -2, 2, [1.0, 2.0, 3.0, 4.0])
    np.testing.assert_array_equal(g.knots, [-3.0, -2.0, 0.0, 3.0, 7.0])
    assert g.knot(0) == 0.0 and g.knot(2) == 7.0
    with pytest.raises(InvalidGrid):
        GridPath(1, 0, 2, [1.0, 0.0])
    with pytest.raises(InvalidGrid):
        GridPath(1, 0, 2, [1.0])
    with pytest.raises(BadWindow):
        GridPath(1, 1, 3, [1.0, 1.0])


def test_gamma_sample_path_count(gamma_spec):
    g = sample_path(gamma_spec, (-1.0, 4.0), 42, n_ref=10)
    assert g.increments.size == 5 * 2**10


def test_streams_are_distinct_and_reproducible():
    a = make_rng(5, 0).random(4)
    b = make_rng(5, 1).random(4)
    assert not np.array_equal(a, b)
    np.testing.assert_array_equal(a, make_rng(5, 0).random(4))
    assert replica_seed(5, 0) != replica_seed(5, 1)
    assert replica_seed(5, 3) == replica_seed(5, 3)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, t=st.lists(st.floats(-3.0, 3.0), min_size=2, max_size=20))
def test_monotone_and_cadlag(seed, t):
    spec = SubordinatorSpec.compound_poisson(2.0, 0.5, 0.3)
    p = sample_compound_poisson(spec, (-3.0, 3.0), seed)
    t = np.unique(t)
    v = evaluate(p, t)
    assert np.all(np.diff(v) > 0)
    ll = left_limit(p, t)
    assert np.all(ll <= v)
    off_jump = ~np.isin(t, p.times)
    np.testing.assert_array_equal(ll[off_jump], v[off_jump])
    np.testing.assert_allclose(evaluate(p, p.times) - left_limit(p, p.times), p.sizes, atol=1e-13)


@settings(max_examples=40, deadline=None)
@given(seed=seeds, u=st.lists(st.floats(0.0, 1.0), min_size=1, max_size=20))
def test_inverse_duality(seed, u):
    spec = SubordinatorSpec.compound_poisson(2.0, 0.5, 0.3)
    p = sample_compound_poisson(spec, (-3.0, 3.0), seed)
    lo, hi = p.x_range()
    x = np.clip(lo + (hi - lo) * np.asarray(u), lo, hi)
    t_star = generalized_inverse(p, x)
    assert np.all(evaluate(p, t_star) >= x - 1e-12 * (1 + np.abs(x)))
    t = -3.0 + 6.0 * np.asarray(u)
    back = generalized_inverse(p, evaluate(p, t))
    assert np.all(back <= t + 1e-12)
    # continuity points: equality up to rounding
    np.testing.assert_allclose(back[~np.isin(t, p.times)], t[~np.isin(t, p.times)], atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=seeds, n=st.integers(0, 4), m=st.integers(1, 6))
def test_dyadic_consistency(seed, n, m):
    spec = SubordinatorSpec.compound_poisson(1.0, 1.0, 1.0)
    p = sample_compound_poisson(spec, (-2.0, 3.0), seed)
    direct = increments_at_level(p, n).increments
    coarse = coarsen(increments_at_level(p, n + m), n).increments
    assert np.max(np.abs(coarse - direct) / direct) <= 2.0 ** -40
