"""Outward shooting for the radial ground-state equation.

The boundary value problem (regular at 0, exponential decay at infinity) is
solved by classifying initial-value trajectories started from a two-term
series at a small radius r0.  Each shot either crosses zero (phi(0) too
high), rebounds (phi' returns to zero with phi still positive: too low), or
survives to r_max below the decay threshold.  Bisection on phi(0) squeezes
the unique Rebound/Crossing transition; the returned profile is the midpoint
shot with its far field replaced by a matched exponential tail, since any
finite-precision shot eventually departs from the decaying solution along
the growing mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp

from .core import Params, RadialProfile, default_profile_grid
from .errors import (BracketNotFound, InvalidBracket, NoConvergence,
                     NonFiniteState, OmegaNotAboveThreshold,
                     StartRadiusTooLarge, StepUnderflow)

__all__ = ["OutcomeKind", "ShootOutcome", "SeriesStart", "series_start",
           "integrate_outward", "find_ground_state", "auto_bracket"]

#: relative tolerance for classification shots (bracket scan, early bisection)
COARSE_TOL = 1e-9
#: relative tolerance for the refinement phase and the final profile shot
FINE_TOL = 3e-13
#: bisection switches from COARSE_TOL to FINE_TOL at this relative width
PHASE_SWITCH_WIDTH = 1e-6
#: series-start acceptance threshold for the estimated next-order term
SERIES_TOL = 1e-10
#: decay threshold factor (times phi(0)) for declaring a shot Decaying
DECAY_FACTOR = 1e-9

MAX_BISECT = 200


class OutcomeKind(str, Enum):
    CROSSING = "Crossing"
    REBOUND = "Rebound"
    DECAYING = "Decaying"


@dataclass(frozen=True)
class ShootOutcome:
    """Classification of one outward shot.

    ``event_radius`` is where phi hit zero (Crossing), where phi' crossed
    zero from below (Rebound), or r_max (Decaying).  ``met_threshold`` is
    meaningful for Decaying only: the final phi and |phi'| were both below
    the decay threshold.  ``profile`` is the sampled trajectory up to the
    event when requested (partial profile, placeholder tail).
    """

    kind: OutcomeKind
    event_radius: float
    phi0: float
    final_phi: float
    final_dphi: float
    met_threshold: bool = False
    profile: RadialProfile | None = None


@dataclass(frozen=True)
class SeriesStart:
    """Two-term expansion of the regular solution at a small radius.

        phi(r)  ~ phi0 + c_reg r^2 + c_sing r^(2-alpha)
        phi'(r) ~ 2 c_reg r + (2-alpha) c_sing r^(1-alpha)

    with c_reg = (omega phi0 - phi0^p)/(2N) and
    c_sing = -gamma phi0 / ((2-alpha)(N-alpha)); for N >= 2 the product
    f phi' ~ r^(min(N-alpha, N)) still vanishes at 0, and for N = 1 the
    slope itself vanishes (alpha < 1), matching the regularity required of
    solutions.  ``est_error`` is the estimated relative size of the first
    neglected (second-order) term at r0.
    """

    r0: float
    phi0: float
    value: float
    slope: float
    c_reg: float
    c_sing: float
    est_error: float


def series_start(params: Params, phi0: float, r0: float | None = None,
                 tol: float = SERIES_TOL) -> SeriesStart:
    """Series initial data at r0 (default 1e-6 / sqrt(omega)).

    Raises StartRadiusTooLarge when the estimated next-order correction
    exceeds ``tol`` relative to phi0; callers retry with a smaller r0.
    """
    if phi0 <= 0.0:
        raise InvalidBracket(f"phi0 must be positive, got {phi0}")
    n, gam, al, om, p = (params.dim, params.gamma, params.alpha,
                         params.omega, params.p)
    if r0 is None:
        r0 = 1e-6 * params.length_scale
    c_reg = (om * phi0 - phi0 ** p) / (2.0 * n)
    c_sing = -gam * phi0 / ((2.0 - al) * (n - al)) if gam != 0.0 else 0.0

    rel1 = (abs(c_reg) * r0 ** 2 + abs(c_sing) * r0 ** (2.0 - al)) / phi0
    # one more application of the integral operator on the first correction
    relpot = ((abs(om) + p * phi0 ** (p - 1.0)) * r0 ** 2 / (2.0 * n)
              + (abs(c_sing) / phi0) * r0 ** (2.0 - al))
    est = rel1 * relpot
    if est > tol:
        raise StartRadiusTooLarge(
            f"series start at r0={r0:g}: estimated relative error {est:.2e} "
            f"> {tol:g}; reduce r0")

    value = phi0 + c_reg * r0 ** 2 + c_sing * r0 ** (2.0 - al)
    slope = 2.0 * c_reg * r0 + (2.0 - al) * c_sing * r0 ** (1.0 - al)
    return SeriesStart(r0=r0, phi0=phi0, value=value, slope=slope,
                       c_reg=c_reg, c_sing=c_sing, est_error=est)


def _acceptable_start(params: Params, phi0: float,
                      r0: float | None = None) -> SeriesStart:
    """series_start with automatic r0 reduction (factor 10 per retry)."""
    r = 1e-6 * params.length_scale if r0 is None else r0
    floor = 1e-13 * params.length_scale
    while True:
        try:
            return series_start(params, phi0, r)
        except StartRadiusTooLarge:
            r /= 10.0
            if r < floor:
                raise


def _rhs_factory(params: Params):
    n1 = params.dim - 1.0
    gam, al, om, p = params.gamma, params.alpha, params.omega, params.p

    if gam == 0.0 and n1 == 0.0:
        def rhs(r, y):
            phi, dphi = y
            return (dphi, om * phi - abs(phi) ** (p - 1.0) * phi)
    elif gam == 0.0:
        def rhs(r, y):
            phi, dphi = y
            return (dphi,
                    om * phi - abs(phi) ** (p - 1.0) * phi - n1 / r * dphi)
    else:
        def rhs(r, y):
            phi, dphi = y
            return (dphi,
                    (om - gam * r ** (-al)) * phi
                    - abs(phi) ** (p - 1.0) * phi - n1 / r * dphi)
    return rhs


def integrate_outward(params: Params, start: SeriesStart,
                      r_max: float | None = None, tol: float = 1e-12,
                      want_profile: bool = False,
                      decay_threshold: float | None = None) -> ShootOutcome:
    """Integrate one shot and classify it.

    Events: phi = 0 crossed downward (Crossing) and phi' = 0 crossed upward
    while phi > 0 (Rebound).  Reaching r_max with phi and |phi'| below the
    decay threshold is Decaying with ``met_threshold=True``; reaching r_max
    otherwise is labeled Decaying with ``met_threshold=False`` (such shots
    sit within integration resolution of the transition and are treated as
    the low side by the bisection).
    """
    if r_max is None:
        r_max = 30.0 * params.length_scale
    if decay_threshold is None:
        decay_threshold = DECAY_FACTOR * start.phi0

    rhs = _rhs_factory(params)

    def ev_cross(r, y):
        return y[0]
    ev_cross.terminal = True
    ev_cross.direction = -1.0

    def ev_rebound(r, y):
        return y[1]
    ev_rebound.terminal = True
    ev_rebound.direction = 1.0

    rtol = tol
    atol = tol * start.phi0 * 1e-2
    y0 = (start.value, start.slope)

    # near-origin window with a hard step cap, then free adaptive stepping
    r_knee = min(1e-2 * params.length_scale, r_max)
    pieces = []
    try:
        if r_knee > start.r0 * 4.0:
            sol = solve_ivp(rhs, (start.r0, r_knee), y0, method="DOP853",
                            events=(ev_cross, ev_rebound), rtol=rtol,
                            atol=atol, max_step=r_knee / 4.0,
                            dense_output=want_profile)
            pieces.append(sol)
            if sol.status != 1 and sol.status != 0:
                raise StepUnderflow(sol.message)
            terminated = sol.status == 1
            if not terminated:
                sol = solve_ivp(rhs, (r_knee, r_max),
                                (sol.y[0][-1], sol.y[1][-1]),
                                method="DOP853",
                                events=(ev_cross, ev_rebound), rtol=rtol,
                                atol=atol, dense_output=want_profile)
                pieces.append(sol)
                if sol.status == -1:
                    raise StepUnderflow(sol.message)
        else:
            sol = solve_ivp(rhs, (start.r0, r_max), y0, method="DOP853",
                            events=(ev_cross, ev_rebound), rtol=rtol,
                            atol=atol, dense_output=want_profile)
            pieces.append(sol)
            if sol.status == -1:
                raise StepUnderflow(sol.message)
    except ValueError as exc:  # scipy signals non-finite RHS values this way
        raise NonFiniteState(str(exc)) from exc

    last = pieces[-1]
    if not (np.isfinite(last.y[0][-1]) and np.isfinite(last.y[1][-1])):
        raise NonFiniteState("integration produced non-finite state")

    crossed = last.t_events[0].size > 0
    rebounded = last.t_events[1].size > 0
    if crossed and rebounded:
        # same-step tie: the shot is the transition itself at resolution
        kind, r_event = OutcomeKind.DECAYING, float(last.t)
        phi_e, dphi_e = float(last.y[0][-1]), float(last.y[1][-1])
        met = abs(phi_e) < decay_threshold and abs(dphi_e) < decay_threshold
    elif crossed:
        kind = OutcomeKind.CROSSING
        r_event = float(last.t_events[0][0])
        phi_e, dphi_e = (float(last.y_events[0][0][0]),
                         float(last.y_events[0][0][1]))
        met = False
    elif rebounded:
        kind = OutcomeKind.REBOUND
        r_event = float(last.t_events[1][0])
        phi_e, dphi_e = (float(last.y_events[1][0][0]),
                         float(last.y_events[1][0][1]))
        met = False
    else:
        kind = OutcomeKind.DECAYING
        r_event = float(last.t[-1])
        phi_e, dphi_e = float(last.y[0][-1]), float(last.y[1][-1])
        met = abs(phi_e) < decay_threshold and abs(dphi_e) < decay_threshold

    profile = None
    if want_profile:
        profile = _sample_profile(params, start, pieces, r_event)
    return ShootOutcome(kind=kind, event_radius=r_event, phi0=start.phi0,
                        final_phi=phi_e, final_dphi=dphi_e,
                        met_threshold=met, profile=profile)


def _dense_eval(pieces, r):
    """Evaluate chained dense outputs at sorted abscissas r."""
    out = np.empty((2, r.size))
    lo = 0
    for sol in pieces:
        hi = np.searchsorted(r, sol.t[-1], side="right")
        if hi > lo:
            out[:, lo:hi] = sol.sol(r[lo:hi])
        lo = hi
    if lo < r.size:  # beyond last piece end (event radius rounding)
        out[:, lo:] = pieces[-1].sol(np.minimum(r[lo:], pieces[-1].t[-1]))
    return out


def _sample_profile(params: Params, start: SeriesStart, pieces,
                    r_event: float) -> RadialProfile:
    """Partial profile on the standard grid, truncated at the event."""
    grid = default_profile_grid(params.omega)
    grid = grid[(grid >= start.r0) & (grid <= r_event)]
    if grid.size < 8:
        grid = np.linspace(start.r0, r_event, 32)
    vals = _dense_eval(pieces, grid)
    phi, dphi = vals[0], vals[1]
    keep = phi > 0.0
    if not keep.all():
        cut = int(np.argmin(keep))
        grid, phi, dphi = grid[:cut], phi[:cut], dphi[:cut]
    rate = math.sqrt(params.omega)
    tail_amp = float(phi[-1] * math.exp(rate * grid[-1])) if grid.size else 0.0
    return RadialProfile(grid=grid, values=phi, derivs=dphi,
                         phi0=start.phi0, tail=(tail_amp, rate),
                         params=params, partial=True)


def _require_omega_admissible(params: Params) -> None:
    if params.omega <= 0.0:
        raise OmegaNotAboveThreshold(
            f"omega must be positive, got {params.omega}")
    if params.omega0 is not None and params.omega <= params.omega0:
        raise OmegaNotAboveThreshold(
            f"omega = {params.omega} is not above omega0 = {params.omega0}; "
            "no positive decaying solution exists")


def auto_bracket(params: Params, seed: float | None = None,
                 k_cap: int = 14) -> tuple[float, float]:
    """Geometric scan phi(0) in {seed * 2^k} for a Rebound/Crossing pair.

    The seed defaults to omega^(1/(p-1)), the amplitude of the constant
    equilibrium, below which a potential-free shot cannot cross.
    """
    _require_omega_admissible(params)
    if seed is None:
        seed = params.omega ** (1.0 / (params.p - 1.0))

    def classify(phi0: float) -> OutcomeKind:
        out = integrate_outward(params, _acceptable_start(params, phi0),
                                tol=COARSE_TOL)
        if out.kind is OutcomeKind.DECAYING and not out.met_threshold:
            return OutcomeKind.REBOUND  # unresolved: treat as low side
        return out.kind

    k = 0
    kind0 = classify(seed)
    if kind0 is OutcomeKind.DECAYING:
        return (seed * (1.0 - 1e-9), seed * (1.0 + 1e-9))
    step = 1 if kind0 is OutcomeKind.REBOUND else -1
    prev_kind, prev_phi0 = kind0, seed
    while abs(k) < k_cap:
        k += step
        phi0 = seed * 2.0 ** k
        kind = classify(phi0)
        if kind is OutcomeKind.DECAYING:
            return (phi0 * (1.0 - 1e-9), phi0 * (1.0 + 1e-9))
        if kind is not prev_kind:
            lo, hi = sorted((prev_phi0, phi0))
            return (lo, hi)
        prev_kind, prev_phi0 = kind, phi0
    raise BracketNotFound(
        f"no Rebound/Crossing transition in phi(0) = {seed:g} * 2^k, "
        f"|k| <= {k_cap} (all shots {prev_kind.value}); "
        "this typically means omega <= omega0")


def find_ground_state(params: Params,
                      bracket: tuple[float, float] | None = None,
                      tol: float | None = None,
                      r_max: float | None = None) -> RadialProfile:
    """Bisection on phi(0) between a rebounding and a crossing shot.

    Returns the midpoint-shot profile on the standard graded grid with the
    far field beyond the match radius replaced by the fitted exponential
    tail; the result satisfies positivity and strict monotonic decrease.
    """
    _require_omega_admissible(params)
    if bracket is None:
        bracket = auto_bracket(params)
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < lo <= hi) or not (math.isfinite(lo) and math.isfinite(hi)):
        raise InvalidBracket(f"bad bracket {bracket}")
    if tol is None:
        tol = 1e-12 * hi

    def shoot(phi0: float, shot_tol: float) -> ShootOutcome:
        return integrate_outward(params, _acceptable_start(params, phi0),
                                 r_max=r_max, tol=shot_tol)

    out_lo = shoot(lo, COARSE_TOL)
    out_hi = shoot(hi, COARSE_TOL)
    accepted = None
    if out_lo.kind is OutcomeKind.DECAYING and out_lo.met_threshold:
        accepted = lo
    elif out_hi.kind is OutcomeKind.DECAYING and out_hi.met_threshold:
        accepted = hi
    else:
        lo_side = out_lo.kind in (OutcomeKind.REBOUND, OutcomeKind.DECAYING)
        hi_side = out_hi.kind is OutcomeKind.CROSSING
        if not (lo_side and hi_side):
            raise InvalidBracket(
                f"bracket endpoints classify as ({out_lo.kind.value}, "
                f"{out_hi.kind.value}); need (Rebound, Crossing)")

    if accepted is None:
        for it in range(MAX_BISECT):
            width = hi - lo
            if width <= tol:
                break
            shot_tol = COARSE_TOL if width > PHASE_SWITCH_WIDTH * hi else FINE_TOL
            mid = 0.5 * (lo + hi)
            out = integrate_outward(params, _acceptable_start(params, mid),
                                    r_max=r_max, tol=shot_tol)
            if out.kind is OutcomeKind.CROSSING:
                hi = mid
            elif out.kind is OutcomeKind.REBOUND:
                lo = mid
            else:
                if out.met_threshold:
                    accepted = mid
                    break
                lo = mid  # unresolved survivor: low side
        else:
            raise NoConvergence(f"bisection did not reach width {tol:g} "
                                f"in {MAX_BISECT} iterations")

    if accepted is not None:
        phi0_star = accepted
        width = min(hi - lo, DECAY_FACTOR * phi0_star)
    else:
        phi0_star = 0.5 * (lo + hi)
        width = hi - lo
    start = _acceptable_start(params, phi0_star)
    return _assemble_profile(params, start, phi0_star, width, r_max=r_max)


def _assemble_profile(params: Params, start: SeriesStart, phi0_star: float,
                      bracket_width: float,
                      r_max: float | None) -> RadialProfile:
    """Final integration with dense output, truncation, and tail matching."""
    if r_max is None:
        r_max = 30.0 * params.length_scale
    rhs = _rhs_factory(params)
    rtol, atol = FINE_TOL, FINE_TOL * start.phi0 * 1e-2

    def ev_cross(r, y):
        return y[0]
    ev_cross.terminal = True
    ev_cross.direction = -1.0

    r_knee = min(1e-2 * params.length_scale, r_max)
    pieces = []
    sol = solve_ivp(rhs, (start.r0, r_knee), (start.value, start.slope),
                    method="DOP853", events=(ev_cross,), rtol=rtol, atol=atol,
                    max_step=r_knee / 4.0, dense_output=True)
    pieces.append(sol)
    if sol.status == 0:
        sol = solve_ivp(rhs, (r_knee, r_max), (sol.y[0][-1], sol.y[1][-1]),
                        method="DOP853", events=(ev_cross,), rtol=rtol,
                        atol=atol, dense_output=True)
        pieces.append(sol)
    r_end = float(pieces[-1].t[-1])

    grid = default_profile_grid(params.omega, r_max=r_max)
    grid = grid[(grid >= start.r0) & (grid <= r_end)]
    phi, dphi = _dense_eval(pieces, grid)

    # clean region: positive and strictly decreasing
    bad = (phi <= 0.0) | (dphi >= 0.0)
    clean_end = int(np.argmax(bad)) if bad.any() else grid.size
    if clean_end < 8:
        raise NoConvergence("midpoint shot has no clean decaying region")

    # contamination radius: bracket-width error grows like e^{sqrt(omega) r}
    om_rt = math.sqrt(params.omega)
    rel = max(bracket_width / phi0_star, 1e-15)
    r_contam = math.log(0.01 / rel) / (2.0 * om_rt) if rel < 0.01 else grid[0]
    # match where phi has decayed to ~1e-6 phi0 but before contamination
    target = None
    for i in range(clean_end):
        if phi[i] <= 1e-6 * phi0_star:
            target = grid[i]
            break
    limit = min(r_contam, grid[clean_end - 1])
    r_match = min(target, limit) if target is not None else limit
    i_match = int(np.searchsorted(grid, r_match, side="right")) - 1
    i_match = max(min(i_match, clean_end - 1), 7)

    delta = -dphi[i_match] / phi[i_match]
    if delta <= 0.0:
        raise NoConvergence("tail fit produced a nonpositive decay rate")
    amp = phi[i_match] * math.exp(delta * grid[i_match])

    keep = slice(0, i_match + 1)
    profile = RadialProfile(grid=grid[keep], values=phi[keep],
                            derivs=dphi[keep], phi0=phi0_star,
                            tail=(float(amp), float(delta)), params=params)
    if not (np.all(profile.values > 0.0) and np.all(profile.derivs < 0.0)):
        raise NoConvergence("assembled profile violates positivity or "
                            "monotonicity")
    return profile
