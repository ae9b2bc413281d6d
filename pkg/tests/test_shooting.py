import math

import numpy as np
import pytest

from gslab.core import Params, make_params
from gslab.errors import (InvalidBracket, OmegaNotAboveThreshold,
                          StartRadiusTooLarge, BracketNotFound)
from gslab.shooting import (OutcomeKind, auto_bracket, find_ground_state,
                            integrate_outward, series_start)

SOL = Params(dim=1, gamma=0.0, alpha=0.5, omega=1.0, p=3.0)


def test_series_start_error_estimate_small():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    st = series_start(p, 2.0)
    assert st.r0 <= 1e-5
    assert st.est_error < 1e-10
    assert st.value == pytest.approx(2.0, rel=1e-6)


def test_series_start_slope_consistent():
    # the slope must equal d/dr of the series value
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    st = series_start(p, 2.0)
    r0 = st.r0
    eps = r0 * 1e-3

    def val(r):
        return (2.0 + st.c_reg * r ** 2
                + st.c_sing * r ** (2.0 - p.alpha))

    fd = (val(r0 + eps) - val(r0 - eps)) / (2 * eps)
    assert st.slope == pytest.approx(fd, rel=1e-6)


def test_series_start_rejects_large_radius():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    with pytest.raises(StartRadiusTooLarge):
        series_start(p, 2.0, r0=0.5, tol=1e-12)


def test_soliton_outcome_classification():
    """Phase-plane oracle at gamma=0, N=1, p=3, omega=1.

    The separatrix sits at phi(0) = sqrt(2): below it the trajectory
    rebounds, above it crosses zero.
    """
    lo = integrate_outward(SOL, series_start(SOL, 1.2))
    hi = integrate_outward(SOL, series_start(SOL, 1.5))
    assert lo.kind is OutcomeKind.REBOUND
    assert hi.kind is OutcomeKind.CROSSING


def test_auto_bracket_contains_separatrix():
    lo, hi = auto_bracket(SOL)
    assert lo < math.sqrt(2.0) < hi


def test_find_ground_state_soliton_oracle():
    prof = find_ground_state(SOL)
    assert prof.phi0 == pytest.approx(math.sqrt(2.0), abs=1e-8)
    r = np.linspace(0.0, 10.0, 400)
    exact = math.sqrt(2.0) / np.cosh(r)
    got = np.concatenate([[prof.phi0], prof.phi_smooth(r[1:])])
    assert np.max(np.abs(got - exact)) <= 1e-6


def test_ground_state_tail_rate_near_sqrt_omega(gs313, p313):
    amp, rate = gs313.tail
    assert amp > 0
    # far-field decay rate should sit near sqrt(omega); the Coulomb-type
    # correction shifts it a little
    assert 0.8 * math.sqrt(p313.omega) < rate < 1.25 * math.sqrt(p313.omega)


def test_ground_state_alpha15(gsal15):
    # stronger singularity: still positive, decreasing, finite tail
    assert gsal15.phi0 > 0
    assert np.all(gsal15.values > 0)
    assert np.all(np.diff(gsal15.values) < 0)


def test_invalid_bracket_rejected():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    with pytest.raises(InvalidBracket):
        find_ground_state(p, bracket=(-1.0, 2.0))


def test_bracket_endpoints_must_classify():
    # both endpoints on the same side of the separatrix
    with pytest.raises(InvalidBracket):
        find_ground_state(SOL, bracket=(0.1, 0.2))


def test_omega_below_threshold_raises():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=0.2,
                    p=3.0).with_omega0(0.25)
    with pytest.raises(OmegaNotAboveThreshold):
        find_ground_state(p)


def test_no_bracket_when_omega_at_threshold():
    # omega = omega0 = 1 exactly for N=2, alpha=1, gamma=1: every shot
    # crosses zero, so no Rebound/Crossing bracket exists
    p = make_params(dim=2, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    with pytest.raises(BracketNotFound):
        auto_bracket(p)


def test_deterministic_resolve(p2w3, gs2w3):
    again = find_ground_state(p2w3)
    assert again.phi0 == gs2w3.phi0
    np.testing.assert_array_equal(again.values, gs2w3.values)
