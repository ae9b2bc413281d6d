import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from gslab.numerics import (cumulative_hermite, exp_tail_moment,
                            fit_leading_exponent, graded_grid, richardson,
                            sphere_area)


def test_sphere_area_oracles():
    assert sphere_area(1) == pytest.approx(2.0)
    assert sphere_area(2) == pytest.approx(2.0 * math.pi)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi)


def test_graded_grid_monotone_and_bounds():
    g = graded_grid(1e-6, 30.0, breakpoint=1.0, ratio=1.05, du=0.01)
    assert g[0] == pytest.approx(1e-6)
    assert g[-1] >= 29.0
    assert np.all(np.diff(g) > 0)


def test_richardson_kills_h2_term():
    # f(h) = L + c h^2: two samples at h and h/2 must return L
    L, c = 1.234, 0.5
    val, unc = richardson(L + c * 0.01, L + c * 0.0025)
    assert val == pytest.approx(L, abs=1e-14)
    # uncertainty is the magnitude of the applied correction
    assert unc == pytest.approx(c * 0.0075 / 3.0, rel=1e-12)


def test_exp_tail_moment_vs_quadrature():
    # integral over (R, inf) of r^m exp(-s r)
    m, s, R = 3.2, 1.7, 4.0
    want = quad(lambda r: r ** m * math.exp(-s * r), R, np.inf)[0]
    assert exp_tail_moment(m, s, R) == pytest.approx(want, rel=1e-10)


def test_fit_leading_exponent_recovers_power():
    r = np.geomspace(1e-8, 1e-5, 20)
    y = 3.0 * r ** 2.5
    assert fit_leading_exponent(r, y) == pytest.approx(2.5, abs=1e-12)


def test_fit_leading_exponent_zero_sequence():
    r = np.geomspace(1e-8, 1e-5, 10)
    assert fit_leading_exponent(r, np.zeros(10)) == math.inf


def test_cumulative_hermite_matches_antiderivative():
    # integrate y = 3 r^2 with known derivative dy = 6 r: the cumulative
    # integral from the first node should be r^3 - r0^3
    r = np.linspace(0.5, 2.0, 40)
    y = 3.0 * r ** 2
    dy = 6.0 * r
    got = cumulative_hermite(r, y, dy)
    want = r ** 3 - r[0] ** 3
    assert_allclose(got, want, atol=1e-12)
