"""Numerical certification of the uniqueness hypotheses.

The uniqueness theorem for the general radial equation rests on five
condition groups:

  (I)   regularity and positivity of the coefficient triple,
  (II)  integrability of f(|g|+h) near 0 (with a weighted variant and,
        for N >= 2, non-integrability of 1/f),
  (III) a U V -> 0 and b V -> 0 as r -> 0,
  (IV)  either (a) b U -> 0 with liminf (c - a g) >= 0, or
        (b) limsup D/a <= 0,
  (V)   either (a) G changes sign at most once, + to - (the change radius
        kappa may be 0 or infinity), or (b) no zero of G has D > 0.

For the power-law case each limit reduces to exponent arithmetic, so the
checks here sample the evaluators on a geometric sequence r = 2^(-k),
fit leading exponents, and compare against the exact exponents where they
are known.  Sign analysis of G uses the representation
G = r^(q-3) (A + B r^(2-alpha) + C r^2) / (2 (p+3)^3): the polynomial part
s(r) = A + B r^(2-alpha) + C r^2 carries all sign changes.

For N = 1 the flux weight f is constant, so 1/f is integrable and the
(II) clause about it is replaced by the requirement f phi' -> 0 at the
origin, which holds for every series-started solution since
phi' ~ r^(1-alpha) with alpha < 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .core import Params
from .errors import RootPolishFailure
from .numerics import fit_leading_exponent
from .pohozaev import PohozaevCoeffs, coeffs as poh_coeffs

__all__ = ["GSignStructure", "ConditionReport", "g_sign_structure",
           "limit_conditions", "check_all"]

#: sampling sequence r = 2^-k for limit verification
K_RANGE = range(4, 41)
#: subrange used for the leading-exponent fit (deepest samples)
K_FIT = 22


@dataclass(frozen=True)
class GSignStructure:
    """Classification of the sign pattern of G on (0, infinity).

    kind is one of "SingleSignChange" (kappa stored; 0 means G <= 0
    everywhere, inf means G >= 0 everywhere), "NoPositiveZeroWithDPositive"
    (zeros stores (r0, D(r0)) pairs, all D < 0), or "Other" (witness
    explains).
    """

    kind: str
    kappa: float | None = None
    zeros: tuple = ()
    witness: str | None = None


def _poly_roots(co: PohozaevCoeffs) -> tuple[list[float], "callable"]:
    """Positive roots of s(r) = A + B r^(2-alpha) + C r^2 (closed form)."""
    A, B, C = co.A, co.B, co.C
    al = co.params.alpha

    def s(r):
        return A + B * np.power(r, 2.0 - al) + C * r * r

    if A == 0.0 and C == 0.0:
        return [], s  # N = 1: pure B r^(2-alpha), no sign change
    # beyond r_up the quadratic term dominates both others
    r_up = 10.0 * max(1.0,
                      math.sqrt(2.0 * abs(A / C)) if C != 0.0 else 1.0,
                      (2.0 * abs(B / C)) ** (1.0 / al) if C != 0.0 else 1.0)
    rs = np.geomspace(1e-8, r_up, 4096)
    vals = s(rs)
    roots = []
    sign = np.sign(vals)
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        try:
            roots.append(float(brentq(s, rs[i], rs[i + 1],
                                      xtol=1e-14, rtol=1e-14)))
        except Exception as exc:
            raise RootPolishFailure(
                f"root polish failed in [{rs[i]:g}, {rs[i+1]:g}]: {exc}"
            ) from exc
    for i in np.nonzero(vals == 0.0)[0]:
        roots.append(float(rs[i]))
    return sorted(roots), s


def g_sign_structure(co: PohozaevCoeffs, params: Params) -> GSignStructure:
    """Sign analysis of G, with D evaluated at any interior zeros."""
    if co.mode == "ClosedForm":
        roots, s = _poly_roots(co)
        probe = s
    else:
        rs = np.geomspace(1e-8, 1e4, 8192)
        vals = co.G(rs)
        sign = np.sign(vals)
        roots = []
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            try:
                roots.append(float(brentq(lambda r: float(co.G(r)),
                                          rs[i], rs[i + 1], xtol=1e-14)))
            except Exception as exc:
                raise RootPolishFailure(str(exc)) from exc
        roots = sorted(roots)
        probe = co.G

    if not roots:
        # one-signed: decide which sign from a midrange probe
        mid = float(probe(1.0))
        if mid == 0.0:
            mid = float(probe(2.0))
        kappa = 0.0 if mid < 0.0 else math.inf
        return GSignStructure(kind="SingleSignChange", kappa=kappa)

    if len(roots) == 1:
        before = float(probe(roots[0] * 0.5))
        after = float(probe(roots[0] * 2.0))
        if before > 0.0 > after:
            return GSignStructure(kind="SingleSignChange", kappa=roots[0])
        if before < 0.0 < after:
            return GSignStructure(
                kind="Other",
                zeros=tuple((r, float(co.D(r))) for r in roots),
                witness="G changes sign - to +, not + to -")

    zero_data = tuple((r, float(co.D(r))) for r in roots)
    if all(dv < 0.0 for _, dv in zero_data):
        return GSignStructure(kind="NoPositiveZeroWithDPositive",
                              zeros=zero_data)
    return GSignStructure(kind="Other", zeros=zero_data,
                          witness="a zero of G has D >= 0")


def _fit_at_zero(evaluator) -> tuple[float, np.ndarray, np.ndarray]:
    rs = np.array([2.0 ** (-k) for k in K_RANGE])
    vals = np.asarray(evaluator(rs), float)
    deep = rs <= 2.0 ** (-K_FIT)
    expo = fit_leading_exponent(rs[deep], np.abs(vals[deep]))
    return expo, rs, vals


def limit_conditions(co: PohozaevCoeffs, params: Params) -> dict:
    """Sampled verdicts and witnesses for conditions (II), (III), (IV).

    Returns a dict with per-condition verdict strings, fitted exponents,
    expected exponents where exact arithmetic applies, and the branch
    certified for (IV).
    """
    n, al, p = params.dim, params.alpha, params.p
    q = 2.0 * (p + 1.0) * (n - 1.0) / (p + 3.0)
    out: dict = {"witnesses": {}}

    # (II): integrability near the origin.  Special case: f(|g|+h) behaves
    # like r^(N-1-alpha), its weighted variant like r^(1-alpha) (times a
    # log for N = 2), and 1/f like r^(1-N).
    w_expo = (n - 1.0) - al
    out["witnesses"]["II_integrand_exponent"] = w_expo
    holds_a = w_expo > -1.0
    if n >= 3:
        weighted = w_expo + (2.0 - n)
    elif n == 2:
        weighted = w_expo  # extra factor is only logarithmic
    else:
        weighted = w_expo  # inner integral is bounded
    holds_b = weighted > -1.0
    if n >= 2:
        holds_c = True  # 1/f ~ r^(1-N) is not integrable
        note_c = "1/f not integrable at 0"
    else:
        holds_c = True
        note_c = ("1/f is integrable in dimension 1; the one-dimensional "
                  "uniqueness route replaces this clause by f phi' -> 0 "
                  "at 0, which the series start guarantees (phi' ~ "
                  "r^(1-alpha))")
    out["II"] = "Holds" if (holds_a and holds_b and holds_c) else "Fails"
    out["witnesses"]["II_note"] = note_c

    # (III): a U V -> 0 and b V -> 0
    expo_auv, rs, vals_auv = _fit_at_zero(
        lambda r: co.a(r) * co.U(r) * co.V(r))
    out["witnesses"]["aUV"] = (rs, vals_auv, expo_auv, q + 2.0 - al)
    if n >= 2:
        expo_bv, _, vals_bv = _fit_at_zero(lambda r: co.b(r) * co.V(r))
        out["witnesses"]["bV"] = (rs, vals_bv, expo_bv, q)
    else:
        expo_bv = math.inf
        out["witnesses"]["bV"] = (rs, np.zeros_like(rs), expo_bv, None)
    out["III"] = "Holds" if (expo_auv > 0.0 and expo_bv > 0.0) else "Fails"

    # (IV): branch (a) certifies N != 2; N = 2 takes branch (b), where
    # D/a -> -infinity
    if n != 2:
        expo_bu, _, vals_bu = _fit_at_zero(lambda r: co.b(r) * co.U(r))
        cma = co.c(rs) - co.a(rs) * co.gfun(rs)
        liminf_ok = bool(np.min(cma[rs <= 2.0 ** (-K_FIT)]) > -1e-12)
        out["witnesses"]["bU"] = (rs, vals_bu, expo_bu,
                                  q - al if n >= 2 else None)
        out["witnesses"]["c_minus_ag"] = cma
        ok = (expo_bu > 0.0 or np.max(np.abs(vals_bu)) == 0.0) and liminf_ok
        out["IV"] = "Holds" if ok else "Fails"
        out["IV_branch"] = "a"
    else:
        da = co.D(rs) / co.a(rs)
        out["witnesses"]["D_over_a"] = (rs, da)
        out["IV"] = ("Holds"
                     if np.all(da[rs <= 2.0 ** (-8)] <= 1e-12) else "Fails")
        out["IV_branch"] = "b"
    return out


@dataclass(frozen=True)
class ConditionReport:
    """Aggregated verdicts for condition groups (I) through (V).

    ``conditions`` maps "I".."V" to Holds/Fails/Inconclusive; ``notes``
    records which branch certified (IV) and (V); ``witnesses`` carries the
    sampled sequences, fitted exponents, kappa, and G-zero data.
    """

    conditions: dict
    notes: dict
    witnesses: dict
    overall: str


def check_all(params: Params) -> ConditionReport:
    """Certify (I)-(V) for the power-law coefficients at these parameters."""
    co = poh_coeffs(None, params)
    conditions: dict = {}
    notes: dict = {}
    witnesses: dict = {}

    # (I): structural for the power-law triple; verify positivity by sample
    rs = np.geomspace(1e-6, 1e3, 64)
    pos = bool(np.all(np.power(rs, params.dim - 1.0) > 0.0))
    conditions["I"] = "Holds" if pos else "Fails"
    notes["I"] = "power-law f and constant h are smooth and positive"

    try:
        lim = limit_conditions(co, params)
    except Exception as exc:  # numeric failure encodes as Inconclusive
        conditions.update({"II": "Inconclusive", "III": "Inconclusive",
                           "IV": "Inconclusive"})
        notes["limits"] = f"{type(exc).__name__}: {exc}"
        lim = {"witnesses": {}}
    else:
        conditions["II"] = lim["II"]
        conditions["III"] = lim["III"]
        conditions["IV"] = lim["IV"]
        notes["II"] = lim["witnesses"].get("II_note", "")
        notes["IV"] = f"branch ({lim['IV_branch']})"
    witnesses.update(lim["witnesses"])

    # (V): N = 2 certifies through the D < 0 route as in the source
    # analysis; other dimensions through the single sign change
    try:
        structure = g_sign_structure(co, params)
    except RootPolishFailure as exc:
        conditions["V"] = "Inconclusive"
        notes["V"] = str(exc)
        structure = None
    if structure is not None:
        witnesses["kappa"] = structure.kappa
        witnesses["g_zeros"] = structure.zeros
        if params.dim == 2:
            ok = structure.kind in ("NoPositiveZeroWithDPositive",
                                    "SingleSignChange")
            # a single + to - change also has no zero with D > 0 only if
            # its zero satisfies D < 0; enforce explicitly
            if structure.kind == "SingleSignChange" and structure.kappa \
                    not in (0.0, math.inf):
                ok = float(co.D(structure.kappa)) < 0.0
                witnesses["g_zeros"] = ((structure.kappa,
                                         float(co.D(structure.kappa))),)
            conditions["V"] = "Holds" if ok else "Fails"
            notes["V"] = "branch (b): every zero of G has D < 0"
        else:
            ok = structure.kind == "SingleSignChange"
            conditions["V"] = "Holds" if ok else "Fails"
            notes["V"] = (f"branch (a): kappa = {structure.kappa!r}"
                          if ok else f"G sign pattern: {structure.witness}")

    overall = ("Holds" if all(v == "Holds" for v in conditions.values())
               else ("Inconclusive"
                     if any(v == "Inconclusive"
                            for v in conditions.values()) else "Fails"))
    return ConditionReport(conditions=conditions, notes=notes,
                           witnesses=witnesses, overall=overall)
