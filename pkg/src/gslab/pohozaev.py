"""Generalized Pohozaev coefficients and the identities built from them.

For a positive solution phi of (f phi')' = f (g phi - h phi^p), the
functional

    J(r) = a phi'^2 / 2 + b phi phi' + c phi^2 / 2 - a g phi^2 / 2
           + a h phi^(p+1) / (p+1)

satisfies dJ/dr = G phi^2, where a = f^(2(p+1)/(p+3)) h^(-2/(p+3)),
b = -a'/2 + (f'/f) a, c = -b' + (f'/f) b and
G = b g + c'/2 - (a g)'/2.  The sign pattern of G (together with the
comparison quantities D, U and V) is what forces uniqueness of the ground
state, so this module exposes all seven as evaluators and provides
numerical checks of the identities on computed profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, quad

from .core import FghTriple, Params, RadialProfile, special_fgh
from .errors import DerivativeUnavailable, OutOfRange, QuadratureFailure

__all__ = ["PohozaevCoeffs", "coeffs", "J", "verify_identity",
           "IdentityReport", "eta_and_X", "EtaXReport"]


@dataclass(frozen=True)
class PohozaevCoeffs:
    """Evaluators a, b, c, G, D, U, V plus the g, h they were built from.

    ``mode`` is "ClosedForm" for the power-law special case (where the
    constants q, A, B, C of the representation
    G = r^(q-3) (A + B r^(2-alpha) + C r^2) / (2 (p+3)^3) are stored) or
    "Generic" when assembled from an FghTriple by chain rule.
    """

    a: Callable
    b: Callable
    c: Callable
    G: Callable
    D: Callable
    U: Callable
    V: Callable
    gfun: Callable
    hfun: Callable
    params: Params
    mode: str
    q: float | None = None
    A: float | None = None
    B: float | None = None
    C: float | None = None


def _closed_form(params: Params) -> PohozaevCoeffs:
    n, gam, al, om, p = (params.dim, params.gamma, params.alpha,
                         params.omega, params.p)
    q = 2.0 * (p + 1.0) * (n - 1.0) / (p + 3.0)
    A = 4.0 * (n - 1.0) * (n - 4.0 + (n - 2.0) * p) * (n + 2.0 - (n - 2.0) * p)
    B = gam * (p + 3.0) ** 2 * (2.0 * (n - 1.0) * (p - 1.0) - (p + 3.0) * al)
    C = -2.0 * om * (n - 1.0) * (p - 1.0) * (p + 3.0) ** 2

    cb = 2.0 * (n - 1.0) / (p + 3.0)
    cc = 2.0 * (n - 1.0) * (n + 2.0 - (n - 2.0) * p) / (p + 3.0) ** 2
    cg = 1.0 / (2.0 * (p + 3.0) ** 3)
    cd = 2.0 * (n - 1.0) * (n - 4.0 + (n - 2.0) * p) / (p + 3.0) ** 2

    def a_(r):
        return np.power(r, q) if q != 0.0 else np.ones_like(np.asarray(r, float))

    def b_(r):
        r = np.asarray(r, float)
        return cb * np.power(r, q - 1.0) if n != 1 else np.zeros_like(r)

    def c_(r):
        r = np.asarray(r, float)
        return cc * np.power(r, q - 2.0) if n != 1 else np.zeros_like(r)

    def G_(r):
        r = np.asarray(r, float)
        poly = A + B * np.power(r, 2.0 - al) + C * r * r
        return cg * np.power(r, q - 3.0) * poly

    def g_(r):
        r = np.asarray(r, float)
        return om - gam * np.power(r, -al) if gam != 0.0 else np.full_like(r, om)

    def D_(r):
        r = np.asarray(r, float)
        out = om * np.power(r, 2.0 * q) - gam * np.power(r, 2.0 * q - al)
        if n != 1:
            out = out + cd * np.power(r, 2.0 * q - 2.0)
        return out

    # U integrates f(|g|+h); |g| switches sign at rstar = (gamma/omega)^(1/alpha)
    if gam > 0.0:
        rstar = (gam / om) ** (1.0 / al)
        head_at_star = (gam * rstar ** (n - al) / (n - al)
                        - om * rstar ** n / n)
    else:
        rstar = 0.0
        head_at_star = 0.0

    def U_(r):
        r = np.asarray(r, float)
        i_pot = np.where(
            r <= rstar,
            gam * np.power(r, n - al) / (n - al) - om * np.power(r, n) / n,
            2.0 * head_at_star + om * np.power(r, n) / n
            - (gam * np.power(r, n - al) / (n - al) if gam != 0.0 else 0.0))
        return (i_pot + np.power(r, n) / n) / np.power(r, n - 1.0)

    def V_(r):
        return np.asarray(r, float) / n

    def h_(r):
        return np.ones_like(np.asarray(r, float))

    return PohozaevCoeffs(a=a_, b=b_, c=c_, G=G_, D=D_, U=U_, V=V_,
                          gfun=g_, hfun=h_, params=params,
                          mode="ClosedForm", q=q, A=A, B=B, C=C)


def _generic(triple: FghTriple, params: Params) -> PohozaevCoeffs:
    for name in ("d2f", "d3f", "dh", "d2h", "d3h", "dg"):
        if getattr(triple, name, None) is None:
            raise DerivativeUnavailable(
                f"generic coefficients need triple.{name}")
    p = params.p
    s = 2.0 * (p + 1.0) / (p + 3.0)
    t = 2.0 / (p + 3.0)
    f, df, d2f, d3f = triple.f, triple.df, triple.d2f, triple.d3f
    g, dg = triple.g, triple.dg
    h, dh, d2h, d3h = triple.h, triple.dh, triple.d2h, triple.d3h

    def parts(r):
        r = np.asarray(r, float)
        fv, f1, f2, f3 = f(r), df(r), d2f(r), d3f(r)
        hv, h1, h2, h3 = h(r), dh(r), d2h(r), d3h(r)
        lf = f1 / fv
        lh = h1 / hv
        w1 = s * lf - t * lh
        w2 = s * (f2 / fv - lf ** 2) - t * (h2 / hv - lh ** 2)
        w3 = (s * (f3 / fv - 3.0 * f1 * f2 / fv ** 2 + 2.0 * lf ** 3)
              - t * (h3 / hv - 3.0 * h1 * h2 / hv ** 2 + 2.0 * lh ** 3))
        av = np.power(fv, s) * np.power(hv, -t)
        a1 = av * w1
        a2 = av * (w1 ** 2 + w2)
        a3 = av * (w1 ** 3 + 3.0 * w1 * w2 + w3)
        L = lf
        L1 = f2 / fv - L ** 2
        L2 = f3 / fv - 3.0 * L * L1 - L ** 3
        bv = -0.5 * a1 + L * av
        b1 = -0.5 * a2 + L1 * av + L * a1
        b2 = -0.5 * a3 + L2 * av + 2.0 * L1 * a1 + L * a2
        cv = -b1 + L * bv
        c1 = -b2 + L1 * bv + L * b1
        return av, a1, bv, cv, c1

    def a_(r):
        return parts(r)[0]

    def b_(r):
        return parts(r)[2]

    def c_(r):
        return parts(r)[3]

    def G_(r):
        r = np.asarray(r, float)
        av, a1, bv, _, c1 = parts(r)
        gv, g1 = g(r), dg(r)
        return bv * gv + 0.5 * c1 - 0.5 * (a1 * gv + av * g1)

    def D_(r):
        av, _, bv, cv, _ = parts(r)
        return bv ** 2 - av * (cv - av * g(np.asarray(r, float)))

    def w_total(r):
        r = np.asarray(r, float)
        return f(r) * (np.abs(g(r)) + h(r))

    def w_mass(r):
        r = np.asarray(r, float)
        return f(r) * h(r)

    U_ = _quadrature_over_f(w_total, f)
    V_ = _quadrature_over_f(w_mass, f)
    return PohozaevCoeffs(a=a_, b=b_, c=c_, G=G_, D=D_, U=U_, V=V_,
                          gfun=g, hfun=h, params=params, mode="Generic")


def _quadrature_over_f(w, f, eps: float = 1e-6):
    """Evaluator r -> (1/f(r)) * int_0^r w, singular head by power rule."""
    wa, wb = float(w(eps / 100.0)), float(w(eps / 10.0))
    if not (wa > 0.0 and wb > 0.0 and np.isfinite(wa) and np.isfinite(wb)):
        raise QuadratureFailure("integrand not positive finite near 0")
    slope = math.log(wb / wa) / math.log(10.0)
    if slope <= -1.0:
        raise QuadratureFailure(
            f"integrand grows like r^{slope:.3f} near 0, not integrable")
    head = float(w(eps)) * eps / (slope + 1.0)

    def evaluate(r):
        scalar = np.isscalar(r)
        rs = np.atleast_1d(np.asarray(r, float))
        out = np.empty_like(rs)
        for i, ri in enumerate(rs):
            if ri <= eps:
                out[i] = float(w(ri)) * ri / (slope + 1.0) / float(f(ri))
                continue
            val, err = quad(lambda x: float(w(x)), eps, ri,
                            epsabs=1e-14, epsrel=1e-12, limit=500)
            if not np.isfinite(val):
                raise QuadratureFailure(f"quadrature failed at r={ri}")
            out[i] = (head + val) / float(f(ri))
        return out[0] if scalar else out

    return evaluate


def coeffs(triple: FghTriple | None, params: Params) -> PohozaevCoeffs:
    """Pohozaev coefficient set; closed form for the power-law case."""
    if triple is None or triple.descriptor == "special":
        return _closed_form(params)
    return _generic(triple, params)


def J(co: PohozaevCoeffs, profile: RadialProfile, r) -> float | np.ndarray:
    """The five-term functional J(r; phi) on a computed profile.

    Uses spline interpolation inside the grid and the fitted tail beyond;
    raises OutOfRange below the first grid point (no extrapolation toward
    the singular origin).
    """
    scalar = np.isscalar(r)
    rs = np.atleast_1d(np.asarray(r, float))
    if np.any(rs < profile.grid[0]):
        raise OutOfRange(
            f"J evaluation below first grid point {profile.grid[0]:g}")
    phi = profile.phi_smooth(rs)
    dphi = profile.dphi_smooth(rs)
    p = co.params.p
    av, bv, cv = co.a(rs), co.b(rs), co.c(rs)
    gv, hv = co.gfun(rs), co.hfun(rs)
    out = (0.5 * av * dphi ** 2 + bv * phi * dphi + 0.5 * cv * phi ** 2
           - 0.5 * av * gv * phi ** 2
           + av * hv * np.power(phi, p + 1.0) / (p + 1.0))
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class IdentityReport:
    """Outcome of the dJ/dr = G phi^2 check."""

    max_residual: float
    at_r: float
    n_points: int
    grid: np.ndarray
    residuals: np.ndarray


def verify_identity(co: PohozaevCoeffs, profile: RadialProfile,
                    grid: np.ndarray | None = None) -> IdentityReport:
    """Check dJ/dr = G phi^2 by Richardson-extrapolated central differences.

    Residuals are normalized by 1 + |G phi^2| pointwise; the report carries
    the maximum and its location.
    """
    if grid is None:
        interior = profile.grid[(profile.grid > 2.0 * profile.grid[0])
                                & (profile.grid < profile.r_last)]
        step = max(1, interior.size // 400)
        grid = interior[::step]
    grid = np.asarray(grid, float)

    spacing = np.gradient(profile.grid)
    local = np.interp(grid, profile.grid, spacing)
    h = np.minimum(local / 4.0, 0.45 * (grid - profile.grid[0]))

    d_coarse = (J(co, profile, grid + h) - J(co, profile, grid - h)) / (2 * h)
    d_fine = (J(co, profile, grid + h / 2)
              - J(co, profile, grid - h / 2)) / h
    djdr = d_fine + (d_fine - d_coarse) / 3.0

    rhs = co.G(grid) * profile.phi_smooth(grid) ** 2
    res = np.abs(djdr - rhs) / (1.0 + np.abs(rhs))
    k = int(np.argmax(res))
    return IdentityReport(max_residual=float(res[k]), at_r=float(grid[k]),
                          n_points=grid.size, grid=grid, residuals=res)


@dataclass(frozen=True)
class EtaXReport:
    """Quotient eta = psi/phi and the comparison functional X = eta^2 J(phi) - J(psi).

    ``eta_prime`` is the direct derivative, ``eta_prime_integral`` the
    integral representation; ``eta_form_reldev`` is their max relative
    deviation on [r_1, 5].  ``xprime_residual`` is the max normalized
    deviation of X' from 2 eta eta' J(phi).
    """

    grid: np.ndarray
    eta: np.ndarray
    eta_prime: np.ndarray
    eta_prime_integral: np.ndarray
    X: np.ndarray
    eta_form_reldev: float
    xprime_residual: float


def eta_and_X(co: PohozaevCoeffs, profile_a: RadialProfile,
              profile_b: RadialProfile,
              grid: np.ndarray | None = None) -> EtaXReport:
    """Comparison machinery for two (near-)solutions, phi = a, psi = b.

    Expects profile_a.phi0 <= profile_b.phi0 (phi below psi at the origin).
    """
    if profile_a.phi0 > profile_b.phi0:
        profile_a, profile_b = profile_b, profile_a
    if grid is None:
        r_hi = min(profile_a.r_last, profile_b.r_last)
        grid = profile_a.grid[(profile_a.grid >= profile_a.grid[0])
                              & (profile_a.grid <= r_hi)]
    grid = np.asarray(grid, float)
    p = co.params.p
    n = co.params.dim

    phi = profile_a.phi_smooth(grid)
    dphi = profile_a.dphi_smooth(grid)
    psi = profile_b.phi_smooth(grid)
    dpsi = profile_b.dphi_smooth(grid)

    eta = psi / phi
    eta_prime = (dpsi * phi - psi * dphi) / phi ** 2

    # integral form: f phi^2 eta' = -int_0^r f h (eta^(p-1) - 1) phi^p psi;
    # f is recovered from a = f^s h^(-t): f = a^(1/s) h^(1/(p+1))
    if co.mode == "ClosedForm":
        fv = np.power(grid, n - 1.0)
    else:
        fv = (co.a(grid) ** ((p + 3.0) / (2.0 * (p + 1.0)))
              * co.hfun(grid) ** (1.0 / (p + 1.0)))
    integrand = (fv * co.hfun(grid) * (np.power(eta, p - 1.0) - 1.0)
                 * np.power(phi, p) * psi)
    # head on (0, r_1): integrand ~ r^(N-1) times a constant
    head = integrand[0] * grid[0] / n
    cumul = head + np.concatenate(
        ([0.0], cumulative_simpson(integrand, x=grid)))
    eta_prime_integral = -cumul / (phi ** 2 * fv)

    mid = (grid >= grid[0]) & (grid <= 5.0)
    denom = np.maximum(np.abs(eta_prime[mid]), 1e-12 * np.max(np.abs(eta_prime)))
    eta_form_reldev = float(np.max(
        np.abs(eta_prime_integral[mid] - eta_prime[mid]) / denom)) \
        if mid.any() else math.inf

    j_phi = J(co, profile_a, grid)
    j_psi = J(co, profile_b, grid)
    X = eta ** 2 * j_phi - j_psi

    dX = np.gradient(X, grid)
    rhs = 2.0 * eta * eta_prime * j_phi
    scale = 1.0 + np.abs(rhs)
    inner = slice(2, -2)
    xres = float(np.max(np.abs(dX[inner] - rhs[inner]) / scale[inner]))

    return EtaXReport(grid=grid, eta=eta, eta_prime=eta_prime,
                      eta_prime_integral=eta_prime_integral, X=X,
                      eta_form_reldev=eta_form_reldev,
                      xprime_residual=xres)
