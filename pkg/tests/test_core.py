import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from gslab.core import (Params, default_profile_grid, make_params,
                        rescale_to_unit_omega, soliton_1d, special_fgh)
from gslab.errors import (AlphaOutOfRange, DimensionInvalid,
                          ExponentOutOfRange, NonpositiveGamma,
                          ValidationError)


def test_make_params_accepts_admissible():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=2.0, p=3.0)
    assert p.dim == 3 and p.p_upper == 5.0
    assert p.length_scale == pytest.approx(1.0 / math.sqrt(2.0))


@pytest.mark.parametrize("kwargs,exc", [
    (dict(dim=0, gamma=1, alpha=0.5, omega=1, p=3), DimensionInvalid),
    (dict(dim=2.5, gamma=1, alpha=0.5, omega=1, p=3), DimensionInvalid),
    (dict(dim=2, gamma=0.0, alpha=0.5, omega=1, p=3), NonpositiveGamma),
    (dict(dim=2, gamma=-1.0, alpha=0.5, omega=1, p=3), NonpositiveGamma),
    (dict(dim=2, gamma=1, alpha=3.0, omega=1, p=3), AlphaOutOfRange),
    (dict(dim=1, gamma=1, alpha=1.0, omega=1, p=3), AlphaOutOfRange),
    (dict(dim=2, gamma=1, alpha=0.0, omega=1, p=3), AlphaOutOfRange),
    (dict(dim=3, gamma=1, alpha=1.0, omega=1, p=5.0), ExponentOutOfRange),
    (dict(dim=3, gamma=1, alpha=1.0, omega=1, p=1.0), ExponentOutOfRange),
    (dict(dim=2, gamma=1, alpha=math.nan, omega=1, p=3), ValidationError),
])
def test_make_params_rejects(kwargs, exc):
    with pytest.raises(exc):
        make_params(**kwargs)


def test_direct_construction_is_the_gamma0_bypass():
    # documented escape hatch for free-equation oracles
    p = Params(dim=1, gamma=0.0, alpha=0.5, omega=1.0, p=3.0)
    assert p.gamma == 0.0


def test_special_fgh_matches_powers():
    p = make_params(dim=3, gamma=2.0, alpha=0.5, omega=1.5, p=3.0)
    t = special_fgh(p)
    r = np.linspace(0.3, 5.0, 40)
    assert_allclose(t.f(r), r ** 2, rtol=1e-14)
    assert_allclose(t.g(r), 1.5 - 2.0 * r ** -0.5, rtol=1e-14)
    assert_allclose(t.h(r), np.ones_like(r))
    assert t.descriptor == "special"
    # derivative callables agree with central differences
    eps = 1e-6
    mid = 2.0
    assert t.df(mid) == pytest.approx((t.f(mid + eps) - t.f(mid - eps))
                                      / (2 * eps), rel=1e-8)
    assert t.dg(mid) == pytest.approx((t.g(mid + eps) - t.g(mid - eps))
                                      / (2 * eps), rel=1e-7)


def test_soliton_profile_matches_closed_form():
    prof = soliton_1d(1.0, 3.0)
    r = np.linspace(0.05, 8.0, 120)
    exact = math.sqrt(2.0) / np.cosh(r)
    # the spline evaluator is the accurate one; phi() trades accuracy for
    # guaranteed monotonicity
    assert_allclose(prof.phi_smooth(r), exact, atol=5e-9)
    assert_allclose(prof.phi(r), exact, atol=2e-5)
    assert prof.phi0 == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_soliton_scaling():
    # phi_omega(r) = sqrt(omega) phi_1(sqrt(omega) r) for p = 3
    prof = soliton_1d(4.0, 3.0)
    assert prof.phi0 == pytest.approx(2.0 * math.sqrt(2.0), rel=1e-12)
    assert prof.tail[1] == pytest.approx(2.0, rel=1e-12)


def test_phi_extends_by_tail(gs313):
    r_far = gs313.r_last * 1.5
    amp, rate = gs313.tail
    assert gs313.phi(r_far) == pytest.approx(amp * math.exp(-rate * r_far),
                                             rel=1e-12)


def test_phi_at_zero_is_phi0(gs313):
    assert gs313.phi(0.0) == pytest.approx(gs313.phi0, rel=1e-9)


def test_profile_monotone_positive(gs313):
    assert np.all(gs313.values > 0)
    assert np.all(np.diff(gs313.values) < 0)
    assert np.all(np.diff(gs313.grid) > 0)


def test_rescale_to_unit_omega():
    p = make_params(dim=3, gamma=0.7, alpha=1.0, omega=4.0, p=3.0)
    rep = rescale_to_unit_omega(p)
    assert rep.rescaled.omega == 1.0
    # lengths scale by sqrt(omega), amplitudes by omega^(1/(p-1))
    assert rep.spatial_factor == pytest.approx(2.0)
    assert rep.amplitude_factor == pytest.approx(2.0)
    assert rep.rescaled.alpha == p.alpha and rep.rescaled.dim == p.dim
    # gamma_tilde = omega^((alpha-2)/2) gamma
    assert rep.rescaled.gamma == pytest.approx(0.35)


def test_default_grid_scales_with_omega():
    """Grid nodes must scale as 1/sqrt(omega).

    This covariance is what makes quadrature bias cancel when mass is
    differenced across nearby omegas, so it is load-bearing for the slope
    criterion, not a cosmetic choice.
    """
    g1 = default_profile_grid(1.0)
    g4 = default_profile_grid(4.0)
    m = min(g1.size, g4.size)
    assert_allclose(g4[:m], g1[:m] / 2.0, rtol=1e-12)


def test_default_grid_shape():
    g = default_profile_grid(1.0)
    assert g[0] > 0 and np.all(np.diff(g) > 0)
    assert g[-1] >= 25.0
