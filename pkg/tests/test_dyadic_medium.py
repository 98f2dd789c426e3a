import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from goupillaud.dyadic_medium import (
    PiecewiseLinearPath,
    build_medium,
    interpolate,
    inverse,
    polygon_at_level,
    speed_at,
)
from goupillaud.errors import InvalidGrid, OutOfRange, OutOfWindow
from goupillaud.levy_paths import (
    GridPath,
    SubordinatorSpec,
    coarsen,
    generalized_inverse,
    increments_at_level,
    sample_compound_poisson,
    sample_gamma_grid,
)


@pytest.fixture
def level1(jump_path):
    return increments_at_level(jump_path, 1, (0, 2))


def test_build_medium_example(level1):
    m = build_medium(level1)
    np.testing.assert_array_equal(m.speeds, [5.0, 1.0])
    np.testing.assert_array_equal(m.boundaries, [0.0, 2.5, 3.0])
    assert m.dt == 0.5


def test_goupillaud_identity_is_exact(gamma_spec):
    g = sample_gamma_grid(gamma_spec, 9, (-512, 1024), 4)
    for n in (0, 3, 9):
        m = build_medium(coarsen(g, n))
        np.testing.assert_array_equal(m.speeds * m.dt, m.thicknesses)
        assert np.all(m.speeds > 0)


def test_drift_only_speeds(drift_path):
    for n in range(5):
        m = build_medium(increments_at_level(drift_path, n))
        assert np.all(m.speeds == 1.0)


def test_medium_needs_grid():
    with pytest.raises(InvalidGrid):
        build_medium([1.0, 2.0])


def test_speed_at(level1, drift_path):
    m = build_medium(level1)
    assert speed_at(m, 1.0) == 5.0
    assert speed_at(m, 0.0) == 5.0
    assert speed_at(m, 2.5) == 1.0          # left-closed layers
    np.testing.assert_array_equal(speed_at(m, [0.1, 2.4999, 2.9]), [5.0, 5.0, 1.0])
    with pytest.raises(OutOfRange):
        speed_at(m, 3.0)
    with pytest.raises(OutOfRange):
        speed_at(m, -0.1)
    md = build_medium(increments_at_level(drift_path, 3))
    assert np.all(speed_at(md, np.linspace(-3.9, 7.9, 50)) == 1.0)


def test_interpolate_examples(level1, drift_path):
    pl = PiecewiseLinearPath(level1)
    assert interpolate(pl, 0.25) == 1.25
    np.testing.assert_array_equal(interpolate(pl, pl.knot_times), pl.knot_values)
    with pytest.raises(OutOfWindow):
        interpolate(pl, 1.5)
    pd = polygon_at_level(drift_path, 4)
    tau = np.linspace(-4, 8, 97)
    np.testing.assert_allclose(interpolate(pd, tau), tau, rtol=0, atol=1e-14)


def test_inverse_examples(level1, jump_path):
    pl = PiecewiseLinearPath(level1)
    assert inverse(pl, 1.0) == pytest.approx(0.2, abs=1e-16)
    np.testing.assert_array_equal(inverse(pl, pl.knot_values), pl.knot_times)
    with pytest.raises(OutOfRange):
        inverse(pl, 3.5)


def test_refinement_nesting(poisson_spec):
    p = sample_compound_poisson(poisson_spec, (-3.0, 3.0), 21)
    for n in range(7):
        a = polygon_at_level(p, n)
        b = polygon_at_level(p, n + 1)
        np.testing.assert_array_equal(b.knot_times[::2], a.knot_times)
        np.testing.assert_array_equal(b.knot_values[::2], a.knot_values)


def test_polygon_from_grid_coarsens(gamma_spec):
    g = sample_gamma_grid(gamma_spec, 6, (-64, 128), 8)
    pl = polygon_at_level(g, 3)
    np.testing.assert_allclose(pl.knot_values, g.knots[::8], rtol=1e-13, atol=1e-13)
    with pytest.raises(TypeError):
        polygon_at_level("nope", 1)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(0, 10), u=st.lists(st.floats(0, 1), min_size=1, max_size=30))
def test_interpolant_sandwich_and_roundtrip(seed, n, u):
    spec = SubordinatorSpec.compound_poisson(1.5, 0.7, 0.5)
    p = sample_compound_poisson(spec, (-2.0, 2.0), seed)
    pl = polygon_at_level(p, n)
    lo, hi = pl.domain
    tau = np.sort(lo + (hi - lo) * np.asarray(u))
    v = interpolate(pl, tau)
    assert np.all(np.diff(v) >= 0)
    k = np.minimum(np.floor(tau * 2**n).astype(int) - pl.grid.k_lo, pl.knot_values.size - 2)
    assert np.all(v >= pl.knot_values[k]) and np.all(v <= pl.knot_values[k + 1])
    slope = np.max(pl.grid.increments) * 2**n
    np.testing.assert_allclose(inverse(pl, v), tau, rtol=0, atol=1e-14 * (1 + slope))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), n=st.integers(0, 12), u=st.lists(st.floats(0, 1), min_size=1, max_size=30))
def test_inverse_proximity(seed, n, u):
    spec = SubordinatorSpec.compound_poisson(1.0, 1.0, 1.0)
    p = sample_compound_poisson(spec, (-2.0, 2.0), seed)
    pl = polygon_at_level(p, n)
    lo, hi = pl.range
    x = np.clip(lo + (hi - lo) * np.asarray(u), lo, hi)
    gap = np.abs(inverse(pl, x) - generalized_inverse(p, x))
    assert np.all(gap <= 2.0 ** -n * (1 + 1e-12))
