"""Action functionals, the mass-slope criterion, and stability sweeps.

All norms are genuine N-dimensional integrals of radial functions, i.e.
surface area of the unit sphere times int_0^inf (...) r^(N-1) dr.  The
quadrature is composite Simpson on the stored profile grid with analytic
corrections for the head cell [0, r_1] and the exponential tail model, so
that tail truncation does not pollute omega derivatives.

The scaling family phi^lambda(x) = lambda^(N/2) phi(lambda x) preserves
mass; each stored integral scales as a known power of lambda, which gives
closed forms for the first and second lambda derivatives of the action
(virial1, virial2) without rescaling any profile numerically.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import simpson

from .core import Params, RadialProfile
from .errors import GslabError, InvalidBracket, QuadratureFailure
from .numerics import exp_tail_moment, sphere_area
from .shooting import auto_bracket, find_ground_state

__all__ = ["StabilityRecord", "functionals", "mass_slope", "classify",
           "sweep", "SweepResult", "solve_with_seed"]


@dataclass(frozen=True)
class StabilityRecord:
    """Integrals and derived functionals of one ground state.

    ``slope`` and ``slope_unc`` (the omega derivative of mass with its
    Richardson uncertainty) are filled by mass_slope / sweep.
    """

    omega: float
    mass: float
    action: float
    nehari: float
    grad_sq: float
    pot_int: float
    lp1: float
    virial1: float
    virial2: float
    slope: float | None = None
    slope_unc: float | None = None
    phi0: float | None = None


def _radial_integral(profile: RadialProfile, values: np.ndarray,
                     weight_power: float, tail_amp: float,
                     tail_rate: float, head_value: float) -> float:
    """sigma_N * [head + Simpson(values * r^w) + analytic tail].

    ``values`` are samples on profile.grid; the tail contribution is
    tail_amp * int_{r_last}^inf r^w e^(-tail_rate r) dr and the head is the
    closed-form integral over [0, r_1] supplied by the caller (the grid
    starts at r_1 ~ 1e-6, so heads are tiny but kept for completeness).
    """
    r = profile.grid
    n = profile.params.dim
    body = simpson(values * np.power(r, weight_power), x=r)
    tail = tail_amp * exp_tail_moment(weight_power, tail_rate, profile.r_last)
    total = sphere_area(n) * (head_value + body + tail)
    if not np.isfinite(total):
        raise QuadratureFailure("non-finite radial integral")
    return float(total)


def functionals(params: Params, profile: RadialProfile) -> StabilityRecord:
    """All stored integrals and the derived functionals for one profile."""
    n, gam, al, om, p = (params.dim, params.gamma, params.alpha,
                         params.omega, params.p)
    phi = profile.values
    dphi = profile.derivs
    r1 = profile.grid[0]
    amp, rate = profile.tail
    a2 = amp * amp
    phi0 = profile.phi0

    mass = _radial_integral(profile, phi ** 2, n - 1.0, a2, 2.0 * rate,
                            phi0 ** 2 * r1 ** n / n)
    grad = _radial_integral(profile, dphi ** 2, n - 1.0,
                            a2 * rate ** 2, 2.0 * rate, 0.0)
    pot = _radial_integral(profile, phi ** 2, n - 1.0 - al, a2, 2.0 * rate,
                           phi0 ** 2 * r1 ** (n - al) / (n - al)) \
        if gam != 0.0 else 0.0
    lp1 = _radial_integral(profile, np.power(phi, p + 1.0), n - 1.0,
                           amp ** (p + 1.0), (p + 1.0) * rate,
                           phi0 ** (p + 1.0) * r1 ** n / n)

    action = 0.5 * (grad - gam * pot + om * mass) - lp1 / (p + 1.0)
    nehari = grad + om * mass - gam * pot - lp1
    m = n * (p - 1.0) / 2.0
    virial1 = grad - 0.5 * gam * al * pot - m / (p + 1.0) * lp1
    virial2 = (grad - 0.5 * gam * al * (al - 1.0) * pot
               - m * (m - 1.0) / (p + 1.0) * lp1)
    return StabilityRecord(omega=om, mass=mass, action=action, nehari=nehari,
                           grad_sq=grad, pot_int=pot, lp1=lp1,
                           virial1=virial1, virial2=virial2,
                           phi0=profile.phi0)


def solve_with_seed(params: Params,
                    seed_phi0: float | None = None) -> RadialProfile:
    """Ground state solve with a warm-started bracket when a seed is known.

    The seed is scaled by the amplitude law omega^(1/(p-1)) relative to the
    seed's own omega by the caller; here it is used directly as a bracket
    center with widening retries, falling back to the full scan.
    """
    if seed_phi0 is not None:
        for lofac, hifac in ((0.93, 1.08), (0.7, 1.45)):
            try:
                return find_ground_state(
                    params, bracket=(lofac * seed_phi0, hifac * seed_phi0))
            except InvalidBracket:
                continue
    return find_ground_state(params)


def mass_slope(params: Params, omega: float | None = None,
               h: float | None = None,
               seed_phi0: float | None = None) -> tuple[float, float]:
    """d(mass)/d(omega) by five-point central differences.

    Solves ground states at omega +- h and omega +- 2h, combines the two
    central differences by Richardson, and reports (slope, uncertainty)
    with uncertainty = |D_h - D_2h| / 3.
    """
    om = params.omega if omega is None else float(omega)
    if h is None:
        h = 0.02 * om
    masses = {}
    seed = seed_phi0
    for k in (-2, -1, 1, 2):
        pk = params.with_omega(om + k * h)
        if seed is not None:
            guess = seed * ((om + k * h) / om) ** (1.0 / (params.p - 1.0))
        else:
            guess = None
        prof = solve_with_seed(pk, guess)
        if seed is None:
            seed = prof.phi0 * (om / (om + k * h)) ** (1.0 / (params.p - 1.0))
        masses[k] = functionals(pk, prof).mass
    d_h = (masses[1] - masses[-1]) / (2.0 * h)
    d_2h = (masses[2] - masses[-2]) / (4.0 * h)
    slope = (4.0 * d_h - d_2h) / 3.0
    unc = abs(d_h - d_2h) / 3.0
    return slope, unc


def classify(record: StabilityRecord) -> str:
    """Stable / Unstable / Indeterminate from the slope and its band."""
    if record.slope is None or record.slope_unc is None:
        raise GslabError("record has no slope; run mass_slope or sweep first")
    if record.slope - record.slope_unc > 0.0:
        return "Stable"
    if record.slope + record.slope_unc < 0.0:
        return "Unstable"
    return "Indeterminate"


@dataclass(frozen=True)
class SweepResult:
    """Per-omega records plus failure notes and the implication audit.

    ``audit`` lists omegas where virial2 <= 0 (within band) while the mass
    slope is >= 0 (within band); the instability implication says this
    must never happen, so a nonempty audit is a red flag, not a result.
    """

    records: tuple
    failures: tuple
    audit: tuple


def _threads() -> int:
    env = os.environ.get("GSLAB_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def _sweep_one(params: Params, om: float) -> StabilityRecord:
    pk = params.with_omega(om)
    prof = find_ground_state(pk)
    rec = functionals(pk, prof)
    slope, unc = mass_slope(pk, seed_phi0=prof.phi0)
    return replace(rec, slope=slope, slope_unc=unc)


def sweep(params: Params, omegas) -> SweepResult:
    """Stability records over an omega grid, in the input order.

    Work is parallelized per omega (bounded by GSLAB_THREADS); failures
    are collected per point instead of aborting the sweep.
    """
    omegas = [float(w) for w in omegas]
    if params.omega0 is not None:
        bad = [w for w in omegas if w <= params.omega0]
        if bad:
            raise InvalidBracket(
                f"omegas {bad} do not exceed omega0 = {params.omega0}")
    results: list = [None] * len(omegas)
    failures = []
    if not omegas:
        return SweepResult(records=(), failures=(), audit=())

    def work(idx):
        try:
            return idx, _sweep_one(params, omegas[idx]), None
        except GslabError as exc:
            return idx, None, f"{type(exc).__name__}: {exc}"

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        for fut in [pool.submit(work, i) for i in range(len(omegas))]:
            idx, rec, err = fut.result()
            if rec is not None:
                results[idx] = rec
            else:
                failures.append((omegas[idx], err))
    records = tuple(r for r in results if r is not None)
    failures = tuple(failures)

    audit = []
    for rec in records:
        v2_band = 1e-6 * max(abs(rec.grad_sq), 1.0)
        if rec.virial2 <= v2_band and rec.slope + rec.slope_unc >= 0.0:
            audit.append((rec.omega, rec.virial2, rec.slope))
    return SweepResult(records=records, failures=failures,
                       audit=tuple(audit))
