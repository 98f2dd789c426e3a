import math

import numpy as np
import pytest
from scipy import integrate

from goupillaud.errors import BadParameter
from goupillaud.initial_data import Gaussian, SmoothedStep, Triangular, closed_form_transform, from_name


def quad_transform(u0, eta, lo, hi):
    """Independent oracle: direct quadrature of int exp(-i y eta) u0(y) dy."""
    re = integrate.quad(lambda y: math.cos(y * eta) * u0(y), lo, hi, limit=400, epsabs=1e-13)[0]
    im = integrate.quad(lambda y: -math.sin(y * eta) * u0(y), lo, hi, limit=400, epsabs=1e-13)[0]
    return complex(re, im)


@pytest.mark.parametrize("center,width,height", [(0.0, 1.0, 1.0), (0.7, 0.5, 2.0), (-1.3, 2.0, 0.25)])
@pytest.mark.parametrize("eta", [0.0, 0.3, 1.0, 4.5, 17.0])
def test_triangular_transform_matches_quadrature(center, width, height, eta):
    u0 = Triangular(center, width, height)
    # split at the kinks so quad sees smooth pieces
    pieces = [(center - width, center), (center, center + width)]
    want = sum(quad_transform(u0, eta, a, b) for a, b in pieces)
    assert closed_form_transform(u0, eta) == pytest.approx(want, abs=1e-11)


@pytest.mark.parametrize("center,width", [(0.0, 1.0), (1.5, 0.3), (-2.0, 2.5)])
@pytest.mark.parametrize("eta", [0.0, 0.5, 2.0, 6.0])
def test_gaussian_transform_matches_quadrature(center, width, eta):
    u0 = Gaussian(center, width)
    want = quad_transform(u0, eta, center - 12 * width, center + 12 * width)
    assert u0.transform(eta) == pytest.approx(want, abs=1e-11)


def test_triangular_known_values():
    u0 = Triangular()
    assert u0.transform(0.0) == 1.0
    assert abs(u0.transform(2 * np.pi)) < 1e-16
    assert u0(0.0) == 1.0 and u0(0.5) == 0.5 and u0(1.0) == 0.0 and u0(-3.0) == 0.0


def test_triangular_series_branch_is_continuous():
    u0 = Triangular(0.0, 1.0, 1.0)
    eta = np.array([1e-4 * (1 - 1e-9), 1e-4 * (1 + 1e-9)])
    a, b = u0.transform(eta)
    assert abs(a - b) < 1e-15


def test_gaussian_is_unit_mass_density():
    u0 = Gaussian(0.0, 1.0)
    assert u0(0.0) == pytest.approx(1 / math.sqrt(2 * math.pi), rel=1e-15)
    assert u0.transform(1.0) == pytest.approx(math.exp(-0.5), rel=1e-15)


@pytest.mark.parametrize("u0", [Triangular(0.2, 0.8, 1.5), Gaussian(0.0, 0.7)])
@pytest.mark.parametrize("bandwidth", [10.0, 50.0, 200.0])
def test_tail_bound_dominates_numeric_tail(u0, bandwidth):
    tail = 2 * integrate.quad(lambda e: abs(u0.transform(e)), bandwidth, bandwidth + 4000,
                              limit=4000)[0]
    assert tail <= u0.transform_tail_bound(bandwidth)


def test_flat_mask_marks_constant_region():
    u0 = Triangular(1.0, 0.5, 1.0)
    y = np.array([0.0, 0.5, 0.75, 1.0, 1.5, 3.0])
    np.testing.assert_array_equal(u0.flat_mask(y), [True, True, False, False, True, True])


def test_smoothed_step():
    u0 = SmoothedStep(0.0, 1.0)
    assert u0(0.0) == 0.5
    assert not u0.integrable_transform
    with pytest.raises(BadParameter):
        u0.transform(0.0)
    assert u0.bounds == (0.0, 1.0)


def test_bad_parameters():
    with pytest.raises(BadParameter):
        Triangular(0.0, 0.0)
    with pytest.raises(BadParameter):
        Gaussian(0.0, -1.0)
    with pytest.raises(BadParameter):
        from_name("boxcar")
    assert from_name("gaussian", center=1.0).center == 1.0
