import math

import numpy as np
import pytest

from gslab.assumptions import (check_all, g_sign_structure, limit_conditions)
from gslab.core import make_params
from gslab.numerics import fit_leading_exponent
from gslab.pohozaev import PohozaevCoeffs, coeffs


def test_kappa_matches_quadratic_oracle():
    """At alpha=1 the sign polynomial of G is an actual quadratic:
    32 + 72 r - 288 r^2 for (N, gamma, omega, p) = (3, 1, 1, 3)."""
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    st = g_sign_structure(coeffs(None, p), p)
    assert st.kind == "SingleSignChange"
    exact = (72.0 + math.sqrt(72.0 ** 2 + 4.0 * 288.0 * 32.0)) / (2 * 288.0)
    assert st.kappa == pytest.approx(exact, rel=1e-12)


def test_n1_kappa_zero_and_1d_route():
    p = make_params(dim=1, gamma=1.0, alpha=0.5, omega=2.0, p=3.0)
    rep = check_all(p)
    assert rep.overall == "Holds"
    assert rep.witnesses["kappa"] == 0.0
    # (II) passes through the one-dimensional route, which trades the
    # 1/f clause for a boundary condition on f phi'
    assert "phi'" in rep.notes["II"] or "one-dimensional" in rep.notes["II"]


def test_n2_certifies_through_d_negative():
    p = make_params(dim=2, gamma=1.0, alpha=1.0, omega=3.0, p=3.0)
    rep = check_all(p)
    assert rep.overall == "Holds"
    assert "(b)" in rep.notes["V"]
    for _, dval in rep.witnesses["g_zeros"]:
        assert dval < 0.0


def test_n2_interior_zeros_found():
    # this corner of parameter space makes G dip positive in the middle:
    # two zeros, both with D < 0
    p = make_params(dim=2, gamma=2.0, alpha=0.25, omega=0.3, p=2.0)
    st = g_sign_structure(coeffs(None, p), p)
    assert st.kind == "NoPositiveZeroWithDPositive"
    assert len(st.zeros) == 2
    assert all(d < 0.0 for _, d in st.zeros)


def test_sign_structure_other_branch():
    # cooked generic coefficients with a - to + crossing must not be
    # certified
    ones = np.ones
    fake = PohozaevCoeffs(
        a=lambda r: np.asarray(r, float) * 0 + 1.0,
        b=lambda r: np.asarray(r, float) * 0,
        c=lambda r: np.asarray(r, float) * 0,
        G=lambda r: np.asarray(r, float) - 1.0,
        D=lambda r: np.asarray(r, float) * 0 + 1.0,
        U=lambda r: np.asarray(r, float),
        V=lambda r: np.asarray(r, float),
        gfun=lambda r: np.asarray(r, float) * 0 + 1.0,
        hfun=lambda r: np.asarray(r, float) * 0 + 1.0,
        params=make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0),
        mode="Generic")
    st = g_sign_structure(fake, fake.params)
    assert st.kind == "Other"


def test_fitted_exponents_match_exact():
    p = make_params(dim=3, gamma=1.0, alpha=1.0, omega=2.0, p=3.0)
    out = limit_conditions(coeffs(None, p), p)
    for name in ("aUV", "bV", "bU"):
        rs, vals, fitted, expected = out["witnesses"][name]
        assert fitted == pytest.approx(expected, abs=0.05), name


def test_exponent_fit_stable_under_range_doubling():
    p = make_params(dim=3, gamma=1.0, alpha=1.5, omega=1.0, p=2.0)
    co = coeffs(None, p)

    def sample(kmin, kmax):
        rs = np.array([2.0 ** (-k) for k in range(kmin, kmax)])
        return rs, co.a(rs) * co.U(rs) * co.V(rs)

    e1 = fit_leading_exponent(*sample(22, 40))
    e2 = fit_leading_exponent(*sample(13, 40))
    assert abs(e1 - e2) < 0.05


def test_check_all_holds_even_at_threshold_frequency():
    # conditions (I)-(V) concern the coefficient functions, not the
    # omega > omega0 solvability clause
    p = make_params(dim=2, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)
    assert check_all(p).overall == "Holds"


def test_check_all_spot_grid():
    for dim, alpha in ((1, 0.25), (2, 1.5), (3, 0.5)):
        p = make_params(dim=dim, gamma=0.5, alpha=alpha, omega=2.0, p=2.0)
        rep = check_all(p)
        assert rep.overall == "Holds", (dim, alpha, rep.conditions)
        assert set(rep.conditions) == {"I", "II", "III", "IV", "V"}
