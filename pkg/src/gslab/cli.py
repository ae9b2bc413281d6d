"""Command-line front end: configuration, persistence, plot emission.

Subcommands: solve, pohozaev, spectrum, stability, assumptions, sweep.
Settings resolve in three layers: built-in defaults, then a JSON config
file (--config), then explicit flags.  Unknown config keys are rejected
before any computation starts.

Every command writes a JSON report carrying "schema": "gslab/1" and the
fully resolved configuration.  Reports contain no timestamps (a sidecar
run.log gets those), and floats are serialized with repr round-trip
formatting, so identical runs produce byte-identical files.

Exit codes: 0 success, 2 validation error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import datetime
import json
import math
import os
import sys

import numpy as np

from . import svgplot
from .core import Params, RadialProfile, make_params
from .errors import (GslabError, InvariantViolation, NumericError,
                     SchemaMismatch, ValidationError)
from .assumptions import check_all
from .pohozaev import coeffs as poh_coeffs, J as poh_J, verify_identity
from .shooting import find_ground_state
from .spectrum import GridSpec, linearized_report, nondegeneracy_check, omega0
from .stability import classify, functionals, mass_slope, sweep as stab_sweep

__all__ = ["main", "run", "load_profile", "save_profile"]

SCHEMA = "gslab/1"
COMMANDS = ("solve", "pohozaev", "spectrum", "stability", "assumptions",
            "sweep")

#: every key a config file may set (flag spellings use - instead of _)
ALLOWED_KEYS = {
    "N": int, "gamma": float, "alpha": float, "omega": float, "p": float,
    "out": str, "formats": str, "with_profile": str,
    "tol": float, "r_max": float, "seed": float,
    "grid_n": int, "grid_rmax": float, "j_max": int, "h": float,
    "omega_min": float, "omega_max": float, "omega_count": int,
    "spacing": str,
}

DEFAULTS = {
    "out": ".",
    "formats": "csv,json",
    "spacing": "linear",
    "omega_count": 8,
}

PROFILE_HEADER_KEYS = ("N", "gamma", "alpha", "omega", "p", "phi0",
                       "tail_rate", "tail_amp")


# --------------------------------------------------------------------------
# configuration

def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ValidationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ValidationError("config file must hold a JSON object")
    out = {}
    for key, val in raw.items():
        if key not in ALLOWED_KEYS:
            raise ValidationError(f"unknown config key {key!r}")
        try:
            out[key] = ALLOWED_KEYS[key](val)
        except (TypeError, ValueError):
            raise ValidationError(
                f"config key {key!r} has invalid value {val!r}") from None
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults, config file, and explicit flags (in that order)."""
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config))
    for key in ALLOWED_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    cfg["command"] = args.command
    return cfg


def _formats(cfg: dict) -> set:
    fmts = {f.strip() for f in cfg.get("formats", "").split(",") if f.strip()}
    bad = fmts - {"csv", "json", "svg"}
    if bad:
        raise ValidationError(f"unknown output format(s): {sorted(bad)}")
    return fmts


def _params_from(cfg: dict, need_omega: bool = True) -> Params:
    missing = [k for k in ("N", "gamma", "alpha", "p") if k not in cfg]
    if need_omega and "omega" not in cfg:
        missing.append("omega")
    if missing:
        raise ValidationError(
            f"missing required parameter(s): {', '.join(missing)}")
    omega = (cfg["omega"] if need_omega
             else cfg.get("omega", cfg.get("omega_min", 1.0)))
    return make_params(dim=cfg["N"], gamma=cfg["gamma"], alpha=cfg["alpha"],
                       omega=omega, p=cfg["p"])


def _validate_numeric(cfg: dict) -> None:
    """Check numeric overrides against module preconditions up front."""
    if cfg.get("grid_n") is not None and cfg["grid_n"] < 100:
        raise ValidationError("grid_n must be >= 100")
    for key in ("tol", "r_max", "grid_rmax", "h"):
        if cfg.get(key) is not None and cfg[key] <= 0.0:
            raise ValidationError(f"{key} must be positive")
    if cfg.get("j_max") is not None and cfg["j_max"] < 1:
        raise ValidationError("j_max must be >= 1")
    if cfg["command"] == "sweep":
        if cfg.get("omega_min") is None or cfg.get("omega_max") is None:
            raise ValidationError("sweep needs omega_min and omega_max")
        if not (0.0 < cfg["omega_min"] < cfg["omega_max"]):
            raise ValidationError("need 0 < omega_min < omega_max")
        if cfg["omega_count"] < 2:
            raise ValidationError("omega_count must be >= 2")
        if cfg["spacing"] not in ("linear", "log"):
            raise ValidationError("spacing must be 'linear' or 'log'")


# --------------------------------------------------------------------------
# serialization helpers

def _py(obj):
    """Recursively convert to plain JSON-safe Python values."""
    if isinstance(obj, dict):
        return {str(k): _py(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_py(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_py(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return v
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def _write_json(path: str, payload: dict) -> None:
    text = json.dumps(_py(payload), indent=2, allow_nan=False)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def _report(cfg: dict, body: dict) -> dict:
    return {"schema": SCHEMA, "command": cfg["command"],
            "config": {k: _py(v) for k, v in sorted(cfg.items())},
            **body}


def _log_line(out_dir: str, argv: list) -> None:
    stamp = datetime.datetime.now().isoformat(timespec="seconds")
    with open(os.path.join(out_dir, "run.log"), "a", encoding="utf-8") as fh:
        fh.write(f"{stamp} gslab {' '.join(argv)}\n")


# --------------------------------------------------------------------------
# profile persistence

def save_profile(path: str, profile: RadialProfile) -> None:
    """Write a profile CSV with # key=value metadata lines."""
    pa = profile.params
    amp, rate = profile.tail
    lines = [f"# N={int(pa.dim)}",
             f"# gamma={float(pa.gamma)!r}",
             f"# alpha={float(pa.alpha)!r}",
             f"# omega={float(pa.omega)!r}",
             f"# p={float(pa.p)!r}",
             f"# phi0={float(profile.phi0)!r}",
             f"# tail_rate={float(rate)!r}",
             f"# tail_amp={float(amp)!r}",
             "r,phi,dphi"]
    for r, v, d in zip(profile.grid, profile.values, profile.derivs):
        lines.append(f"{float(r)!r},{float(v)!r},{float(d)!r}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_profile(path: str) -> RadialProfile:
    """Read a profile CSV back; validates metadata and grid invariants."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except FileNotFoundError:
        raise ValidationError(f"profile file not found: {path}") from None
    meta: dict = {}
    rows = []
    saw_columns = False
    for line in lines:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, _, val = body.partition("=")
                meta[key.strip()] = val.strip()
            continue
        if not saw_columns:
            if line.replace(" ", "") != "r,phi,dphi":
                raise SchemaMismatch(
                    f"expected column line 'r,phi,dphi', got {line!r}")
            saw_columns = True
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise SchemaMismatch(f"bad data row: {line!r}")
        rows.append(tuple(float(x) for x in parts))

    missing = [k for k in PROFILE_HEADER_KEYS if k not in meta]
    if missing:
        raise SchemaMismatch(f"missing header(s): {', '.join(missing)}")
    if not rows:
        raise SchemaMismatch("profile has no data rows")

    params = make_params(dim=int(meta["N"]), gamma=float(meta["gamma"]),
                         alpha=float(meta["alpha"]),
                         omega=float(meta["omega"]), p=float(meta["p"]))
    grid = np.array([r for r, _, _ in rows])
    values = np.array([v for _, v, _ in rows])
    derivs = np.array([d for _, _, d in rows])

    if grid[0] <= 0.0 or not np.all(np.diff(grid) > 0.0):
        raise InvariantViolation("grid must be positive and strictly "
                                 "increasing")
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(derivs))):
        raise InvariantViolation("profile values must be finite")
    if np.any(values <= 0.0) or np.any(np.diff(values) >= 0.0):
        raise InvariantViolation("ground-state profile must be positive "
                                 "and strictly decreasing")
    phi0 = float(meta["phi0"])
    rate = float(meta["tail_rate"])
    amp = float(meta["tail_amp"])
    if phi0 <= 0.0 or rate <= 0.0 or amp <= 0.0:
        raise InvariantViolation("phi0, tail_rate, tail_amp must be positive")
    return RadialProfile(grid=grid, values=values, derivs=derivs, phi0=phi0,
                         tail=(amp, rate), params=params)


def _profile_for(cfg: dict) -> tuple[Params, RadialProfile]:
    """Either load --with-profile or solve fresh from parameters."""
    if cfg.get("with_profile"):
        profile = load_profile(cfg["with_profile"])
        return profile.params, profile
    params = _params_from(cfg)
    profile = find_ground_state(params, tol=cfg.get("tol"),
                                r_max=cfg.get("r_max"))
    return params, profile


# --------------------------------------------------------------------------
# commands

def _cmd_solve(cfg: dict, out_dir: str, fmts: set) -> dict:
    params = _params_from(cfg)
    profile = find_ground_state(params, tol=cfg.get("tol"),
                                r_max=cfg.get("r_max"))
    co = poh_coeffs(None, params)
    ident = verify_identity(co, profile)
    if "csv" in fmts:
        save_profile(os.path.join(out_dir, "profile.csv"), profile)
    if "svg" in fmts:
        svg = svgplot.line_plot(
            [(profile.grid, profile.values, "phi")],
            title="ground state profile", xlabel="r", ylabel="phi")
        with open(os.path.join(out_dir, "phi.svg"), "w") as fh:
            fh.write(svg)
    amp, rate = profile.tail
    return {"result": {
        "phi0": profile.phi0,
        "tail_rate": rate,
        "tail_amp": amp,
        "grid_points": int(profile.grid.size),
        "r_first": float(profile.grid[0]),
        "r_last": float(profile.grid[-1]),
        "identity_max_residual": ident.max_residual,
        "identity_at_r": ident.at_r,
    }}


def _cmd_pohozaev(cfg: dict, out_dir: str, fmts: set) -> dict:
    params, profile = _profile_for(cfg)
    co = poh_coeffs(None, params)
    ident = verify_identity(co, profile)
    jvals = np.asarray(poh_J(co, profile, profile.grid), float)
    jmax = float(np.max(np.abs(jvals))) or 1.0
    if "svg" in fmts:
        rs = profile.grid
        with open(os.path.join(out_dir, "G.svg"), "w") as fh:
            fh.write(svgplot.line_plot([(rs, co.G(rs), "G")],
                                       title="G(r)", xlabel="r",
                                       ylabel="G"))
        with open(os.path.join(out_dir, "J.svg"), "w") as fh:
            fh.write(svgplot.line_plot([(rs, jvals, "J")],
                                       title="J(r)", xlabel="r",
                                       ylabel="J"))
        with open(os.path.join(out_dir, "GD_log.svg"), "w") as fh:
            fh.write(svgplot.line_plot(
                [(rs, np.abs(co.G(rs)), "|G|"),
                 (rs, np.abs(co.D(rs)), "|D|")],
                title="|G| and |D| near 0", xlabel="r", ylabel="",
                logx=True, logy=True))
    body = {"identity": {"max_residual": ident.max_residual,
                         "at_r": ident.at_r,
                         "n_points": ident.n_points},
            "J": {"min_normalized": float(np.min(jvals) / jmax),
                  "at_r_last_normalized": float(abs(jvals[-1]) / jmax),
                  "max_abs": float(np.max(np.abs(jvals)))}}
    if co.mode == "ClosedForm":
        body["constants"] = {"q": co.q, "A": co.A, "B": co.B, "C": co.C}
    return body


def _cmd_spectrum(cfg: dict, out_dir: str, fmts: set) -> dict:
    params, profile = _profile_for(cfg)
    spec = None
    if cfg.get("grid_n") is not None or cfg.get("grid_rmax") is not None:
        base = GridSpec(r_max=cfg.get("grid_rmax") or 30.0,
                        n=cfg.get("grid_n") or 4000)
        spec = base
    rep = linearized_report(params, profile, j_max=cfg.get("j_max"),
                            grid_spec=spec)
    verdict = nondegeneracy_check(rep)
    w0 = omega0(params) if params.gamma > 0.0 else 0.0

    def sectors_out(r):
        return [{"j": s.j, "mu": s.mu,
                 "eigenvalues": s.values, "uncertainties": s.uncertainties,
                 "neg_count": s.neg_count,
                 "corr_phi": s.corr_phi}
                for s in r.sectors]

    if "svg" in fmts:
        series = []
        for s in rep.L1.sectors:
            for k, lam in enumerate(np.asarray(s.values)):
                series.append(([s.j - 0.3, s.j + 0.3], [lam, lam],
                               "L1" if (s.j == 0 and k == 0) else ""))
        with open(os.path.join(out_dir, "eigenvalues.svg"), "w") as fh:
            fh.write(svgplot.line_plot(series, title="L1 sector ladder",
                                       xlabel="sector j",
                                       ylabel="eigenvalue"))
    return {"omega0": w0,
            "eps0": rep.eps0,
            "j_max": rep.j_max,
            "L1": {"sectors": sectors_out(rep.L1),
                   "kernel_candidates": list(rep.L1.kernel_candidates)},
            "L2": {"sectors": sectors_out(rep.L2),
                   "kernel_candidates": list(rep.L2.kernel_candidates)},
            "verdict": {"status": verdict.status, "eps0": verdict.eps0,
                        "margins": verdict.margins,
                        "detail": verdict.detail}}


def _cmd_stability(cfg: dict, out_dir: str, fmts: set) -> dict:
    params, profile = _profile_for(cfg)
    rec = functionals(params, profile)
    slope, unc = mass_slope(params, h=cfg.get("h"), seed_phi0=profile.phi0)
    rec = dataclasses.replace(rec, slope=slope, slope_unc=unc)
    verdict = classify(rec)
    fields = {k: getattr(rec, k) for k in
              ("omega", "mass", "action", "nehari", "grad_sq", "pot_int",
               "lp1", "virial1", "virial2", "slope", "slope_unc", "phi0")}
    return {"record": fields, "verdict": verdict}


def _cmd_assumptions(cfg: dict, out_dir: str, fmts: set) -> dict:
    params = _params_from(cfg)
    rep = check_all(params)
    wit = rep.witnesses
    exponents = {}
    for name in ("aUV", "bV", "bU"):
        if name in wit:
            rs, vals, fitted, expected = wit[name]
            exponents[name] = {"fitted": fitted, "expected": expected}
    body = {"conditions": rep.conditions,
            "notes": rep.notes,
            "overall": rep.overall,
            "witnesses": {"kappa": wit.get("kappa"),
                          "g_zeros": [list(z) for z in
                                      wit.get("g_zeros", ())],
                          "exponents": exponents}}
    return body


def _cmd_sweep(cfg: dict, out_dir: str, fmts: set) -> dict:
    params = _params_from(cfg, need_omega=False)
    if cfg["spacing"] == "log":
        omegas = np.geomspace(cfg["omega_min"], cfg["omega_max"],
                              cfg["omega_count"])
    else:
        omegas = np.linspace(cfg["omega_min"], cfg["omega_max"],
                             cfg["omega_count"])
    result = stab_sweep(params, omegas)
    cols = ("omega", "mass", "action", "nehari", "grad_sq", "pot_int",
            "lp1", "virial1", "virial2", "slope", "slope_unc", "phi0")
    records = [{c: getattr(r, c) for c in cols} for r in result.records]
    if "csv" in fmts:
        lines = [",".join(cols)]
        for r in result.records:
            lines.append(",".join(repr(float(getattr(r, c)))
                                  for c in cols))
        with open(os.path.join(out_dir, "sweep.csv"), "w") as fh:
            fh.write("\n".join(lines) + "\n")
    if "svg" in fmts and result.records:
        xs = [r.omega for r in result.records]
        ys = [r.mass for r in result.records]
        with open(os.path.join(out_dir, "mass_omega.svg"), "w") as fh:
            fh.write(svgplot.line_plot([(xs, ys, "mass")],
                                       title="mass vs omega",
                                       xlabel="omega", ylabel="mass"))
    return {"n_requested": int(len(omegas)),
            "n_completed": len(records),
            "records": records,
            "failures": [{"omega": om, "error": msg}
                         for om, msg in result.failures],
            "audit": list(result.audit)}


_HANDLERS = {"solve": _cmd_solve, "pohozaev": _cmd_pohozaev,
             "spectrum": _cmd_spectrum, "stability": _cmd_stability,
             "assumptions": _cmd_assumptions, "sweep": _cmd_sweep}


def run(cfg: dict, argv: list | None = None) -> int:
    """Execute a resolved config; returns the process exit code."""
    fmts = _formats(cfg)
    _validate_numeric(cfg)
    # parameter validation happens before compute too, unless a profile
    # file supplies the parameters
    if not cfg.get("with_profile") and cfg["command"] != "sweep":
        _params_from(cfg)
    out_dir = cfg.get("out", ".")
    os.makedirs(out_dir, exist_ok=True)
    body = _HANDLERS[cfg["command"]](cfg, out_dir, fmts)
    report = _report(cfg, body)
    _write_json(os.path.join(out_dir, f"{cfg['command']}.json"), report)
    _log_line(out_dir, argv or [])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gslab",
        description="Ground states of the stationary NLS with an "
                    "inverse-power potential: solve, verify, classify.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
            ("solve", "compute a ground-state profile"),
            ("pohozaev", "verify the monotonicity identity on a profile"),
            ("spectrum", "linearized operators and nondegeneracy verdict"),
            ("stability", "functionals, mass slope, stability verdict"),
            ("assumptions", "certify the uniqueness conditions"),
            ("sweep", "stability records across a range of omega")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--N", type=int, dest="N", help="dimension")
        sp.add_argument("--gamma", type=float)
        sp.add_argument("--alpha", type=float)
        sp.add_argument("--omega", type=float)
        sp.add_argument("--p", type=float)
        sp.add_argument("--out", help="output directory (default .)")
        sp.add_argument("--formats",
                        help="comma list from csv,json,svg (default csv,json)")
        sp.add_argument("--tol", type=float, help="bisection tolerance")
        sp.add_argument("--r-max", type=float, dest="r_max",
                        help="integration horizon")
        if name in ("pohozaev", "spectrum", "stability"):
            sp.add_argument("--with-profile", dest="with_profile",
                            help="profile CSV to reuse instead of solving")
        if name == "spectrum":
            sp.add_argument("--jmax", type=int, dest="j_max",
                            help="highest angular sector")
            sp.add_argument("--grid-n", type=int, dest="grid_n")
            sp.add_argument("--grid-rmax", type=float, dest="grid_rmax")
        if name == "stability":
            sp.add_argument("--h", type=float,
                            help="omega step for the mass slope")
        if name == "sweep":
            sp.add_argument("--omega-min", type=float, dest="omega_min")
            sp.add_argument("--omega-max", type=float, dest="omega_max")
            sp.add_argument("--omega-count", type=int, dest="omega_count")
            sp.add_argument("--spacing", choices=("linear", "log"))
    return parser


def main(argv: list | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        return run(cfg, argv)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except GslabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
