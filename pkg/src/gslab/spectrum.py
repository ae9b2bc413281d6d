"""Sector-wise radial eigensolves for the linearized operators.

A radial Schrodinger operator -Delta + W restricted to the angular sector
with Laplace-Beltrami eigenvalue mu acts on radial parts as

    -(1/f) (f psi')' + (W + mu/r^2) psi,       f = r^(N-1).

We discretize the divergence form by finite volumes on the offset grid
r_i = (i - 1/2) h and symmetrize with u_i = psi_i sqrt(f(r_i) h), which
yields a symmetric tridiagonal matrix whose lowest eigenpairs come from
bisection plus inverse iteration.  The flux through r = 0 vanishes for
N >= 2 because f(0) = 0; for N = 1 the even sector gets a zero-flux
(Neumann) face and the odd sector a reflecting (Dirichlet) ghost.  The
r^(-alpha) potential singularity is averaged analytically over the first
cell against the volume weight.

This discretization keeps O(h^2) convergence for N = 2, where the textbook
substitution u = r^((N-1)/2) psi produces a -1/(4r^2) inner term that
central differences resolve only logarithmically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import Params, RadialProfile
from .errors import (ConvergenceFailure, GridTooCoarse, Inconclusive,
                     NoNegativeEigenvalue, SingularityUnresolved,
                     ValidationError)

__all__ = ["GridSpec", "SectorOperator", "EigenPairs", "SectorEigen",
           "SpectrumReport", "LinearizedReport", "NondegeneracyVerdict",
           "mu_ladder", "build_sector", "lowest_eigenpairs", "omega0",
           "linearized_report", "nondegeneracy_check"]


@dataclass(frozen=True)
class GridSpec:
    """Uniform eigensolver grid: n cells on (0, r_max)."""

    r_max: float
    n: int

    def refined(self, factor: int = 2) -> "GridSpec":
        return GridSpec(self.r_max, self.n * factor)


def mu_ladder(dim: int, j_max: int) -> list[tuple[int, float]]:
    """(j, mu_j) for j = 0..j_max, counting angular multiplicities.

    mu values are l(l+N-2) with multiplicity C(N+l-1,l) - C(N+l-3,l-2);
    the ladder starts 0 = mu_0 < mu_1 = ... = mu_N = N-1 < mu_{N+1} <= ...
    For N = 1 the two parity sectors are j = 0 (even) and j = 1 (odd).
    """
    if dim == 1:
        if j_max > 1:
            j_max = 1
        return [(j, 0.0) for j in range(j_max + 1)]
    out = []
    ell = 0
    while len(out) <= j_max:
        if ell == 0:
            mult = 1
        else:
            mult = math.comb(dim + ell - 1, ell)
            if ell >= 2:
                mult -= math.comb(dim + ell - 3, ell - 2)
        mu = float(ell * (ell + dim - 2))
        for _ in range(mult):
            out.append((len(out), mu))
            if len(out) > j_max:
                break
        ell += 1
    return out[:j_max + 1]


def _ell_of_j(dim: int, j: int) -> int:
    """Angular momentum degree whose block contains ladder index j."""
    if dim == 1:
        return j
    count, ell = 1, 0
    while j >= count:
        ell += 1
        mult = math.comb(dim + ell - 1, ell)
        if ell >= 2:
            mult -= math.comb(dim + ell - 3, ell - 2)
        count += mult
    return ell


@dataclass(frozen=True)
class SectorOperator:
    """Assembled tridiagonal sector operator.

    ``diag``/``offdiag`` hold the symmetric tridiagonal matrix in the
    u = psi sqrt(f h) variables; ``grid`` holds the cell centers.  ``bc``
    records the inner boundary treatment ("natural" for N >= 2 where the
    flux vanishes with f, "neumann"/"dirichlet" for the N = 1 parities).
    """

    sector_j: int
    mu_j: float
    potential: Callable
    grid: np.ndarray
    diag: np.ndarray
    offdiag: np.ndarray
    bc: str
    params: Params
    spec: GridSpec

    @property
    def matrix_norm_estimate(self) -> float:
        return float(np.max(np.abs(self.diag)) + 2.0 * np.max(np.abs(self.offdiag)))


def _first_cell_average(params: Params, h: float) -> float:
    """Volume average of -gamma r^(-alpha) over the cell (0, h)."""
    n, gam, al = params.dim, params.gamma, params.alpha
    if gam == 0.0:
        return 0.0
    return -gam * n * h ** (-al) / (n - al)


def build_sector(params: Params, W: Callable, j: int,
                 grid_spec: GridSpec) -> SectorOperator:
    """Assemble the sector-j operator -(1/f)(f psi')' + W + mu_j/r^2.

    ``W`` is the full radial potential including any r^(-alpha) singular
    part proportional to -gamma; that part is replaced by its analytic
    cell average on the first cell.  Raises GridTooCoarse below 100 points
    and SingularityUnresolved when the first-cell average is more than 50%
    away from the midpoint value of W.
    """
    if grid_spec.n < 100:
        raise GridTooCoarse(f"need at least 100 grid points, got {grid_spec.n}")
    if j < 0:
        raise ValidationError(f"sector index must be >= 0, got {j}")
    n_dim = params.dim
    ladder = mu_ladder(n_dim, max(j, 1))
    if n_dim == 1 and j > 1:
        raise ValidationError("dimension 1 has only parity sectors j=0,1")
    mu = ladder[j][1]

    h = grid_spec.r_max / grid_spec.n
    i = np.arange(1, grid_spec.n + 1)
    r = (i - 0.5) * h
    faces = i * h  # r_{i+1/2}
    n1 = n_dim - 1.0

    w_vals = np.asarray(W(r), float).copy()
    # replace the singular part on the first cell by its exact average
    gam, al = params.gamma, params.alpha
    if gam > 0.0:
        avg = _first_cell_average(params, h)
        mid = -gam * r[0] ** (-al)
        w_vals[0] += avg - mid
        if abs(avg - mid) > 0.5 * abs(mid):
            raise SingularityUnresolved(
                f"first-cell average {avg:.4g} vs midpoint {mid:.4g} "
                "differ by more than 50%; refine the grid")

    if mu != 0.0:
        w_vals = w_vals + mu / r ** 2

    f_face = faces ** n1
    f_cell = r ** n1
    inv_h2 = 1.0 / h ** 2

    diag = np.empty(grid_spec.n)
    # interior flux balance: (f_{i+1/2} + f_{i-1/2}) / (h^2 f_i)
    diag[1:] = (f_face[1:] + f_face[:-1]) * inv_h2 / f_cell[1:]
    off = -f_face[:-1] * inv_h2 / np.sqrt(f_cell[:-1] * f_cell[1:])

    if n_dim >= 2:
        bc = "natural"  # inner face has f(0) = 0: no flux contribution
        diag[0] = f_face[0] * inv_h2 / f_cell[0]
    elif j == 0:
        bc = "neumann"
        diag[0] = f_face[0] * inv_h2 / f_cell[0]
    else:
        bc = "dirichlet"
        # ghost value u_0 = -u_1 across r = 0
        diag[0] = (f_face[0] * inv_h2 / f_cell[0]) * 3.0

    diag = diag + w_vals
    return SectorOperator(sector_j=j, mu_j=mu, potential=W, grid=r,
                          diag=diag, offdiag=off, bc=bc, params=params,
                          spec=grid_spec)


@dataclass(frozen=True)
class EigenPairs:
    """Lowest eigenvalues (ascending) with orthonormal eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray  # (n, k), columns normalized in discrete l2
    residuals: np.ndarray


def lowest_eigenpairs(op: SectorOperator, k: int) -> EigenPairs:
    """k smallest eigenpairs via tridiagonal bisection + inverse iteration."""
    n = op.diag.size
    if k < 1 or k > n:
        raise ConvergenceFailure(f"requested {k} eigenpairs from a {n}-point "
                                 "operator")
    try:
        vals, vecs = eigh_tridiagonal(op.diag, op.offdiag, select="i",
                                      select_range=(0, k - 1))
    except Exception as exc:
        raise ConvergenceFailure(f"tridiagonal eigensolve failed: {exc}") from exc

    # residual ||H u - lambda u|| per pair, against a cheap norm estimate
    hnorm = op.matrix_norm_estimate
    res = np.empty(k)
    for m in range(k):
        u = vecs[:, m]
        hu = op.diag * u
        hu[:-1] += op.offdiag * u[1:]
        hu[1:] += op.offdiag * u[:-1]
        res[m] = np.linalg.norm(hu - vals[m] * u)
    if np.any(res > 1e-8 * hnorm):
        raise ConvergenceFailure(
            f"eigenpair residual {res.max():.2e} exceeds 1e-8 * |H| = "
            f"{1e-8 * hnorm:.2e}")
    return EigenPairs(values=vals, vectors=vecs, residuals=res)


def _default_omega0_spec(params: Params) -> GridSpec:
    # the bound-state size of -Delta - gamma r^(-alpha) scales like
    # gamma^(-1/(2-alpha))
    scale = params.gamma ** (-1.0 / (2.0 - params.alpha))
    return GridSpec(r_max=60.0 * scale, n=4000)


def omega0(params: Params, grid_spec: GridSpec | None = None,
           with_uncertainty: bool = False):
    """omega0 = -(lowest eigenvalue of -Delta - gamma r^(-alpha)).

    The ground state of the Schrodinger operator is radial, so only sector
    j = 0 is solved, on two resolutions with Richardson extrapolation.
    """
    if grid_spec is None:
        grid_spec = _default_omega0_spec(params)
    gam, al = params.gamma, params.alpha

    def W(r):
        return -gam * np.power(r, -al)

    lam = []
    for gs in (grid_spec, grid_spec.refined()):
        op = build_sector(params, W, 0, gs)
        lam.append(float(lowest_eigenpairs(op, 1).values[0]))
    lam_star = lam[1] + (lam[1] - lam[0]) / 3.0
    unc = abs(lam[1] - lam[0]) / 3.0
    if lam_star >= 0.0:
        raise NoNegativeEigenvalue(
            f"lowest eigenvalue {lam_star:.3e} is nonnegative; enlarge "
            "r_max or refine the grid")
    value = -lam_star
    return (value, unc) if with_uncertainty else value


@dataclass(frozen=True)
class SectorEigen:
    """Extrapolated eigen-data for one sector of one operator."""

    j: int
    mu: float
    values: np.ndarray
    uncertainties: np.ndarray
    neg_count: int
    vectors: np.ndarray
    grid: np.ndarray
    corr_phi: float | None = None


@dataclass(frozen=True)
class SpectrumReport:
    """Per-sector eigen-data for one linearized operator."""

    operator: str
    sectors: tuple
    resolutions: tuple
    eps0: float
    kernel_candidates: tuple

    def sector(self, j: int) -> SectorEigen:
        for s in self.sectors:
            if s.j == j:
                return s
        raise ValidationError(f"no sector {j} in report")


@dataclass(frozen=True)
class LinearizedReport:
    """Eigen-reports for L1 (coefficient p) and L2 (coefficient 1)."""

    L1: SpectrumReport
    L2: SpectrumReport
    params: Params
    j_max: int
    eps0: float


def _report_for(opname: str, params: Params, W: Callable, j_max: int,
                k: int, grid_spec: GridSpec,
                phi_u: np.ndarray | None) -> SpectrumReport:
    ladder = mu_ladder(params.dim, j_max)
    fine = grid_spec.refined()
    cache: dict[float, tuple] = {}
    sectors = []
    for j, mu in ladder:
        key = (mu, j if params.dim == 1 else -1.0)
        if key not in cache:
            pairs = []
            for gs in (grid_spec, fine):
                op = build_sector(params, W, j, gs)
                pairs.append((op, lowest_eigenpairs(op, k)))
            (op_c, eig_c), (op_f, eig_f) = pairs
            vals = eig_f.values + (eig_f.values - eig_c.values) / 3.0
            unc = np.abs(eig_f.values - eig_c.values) / 3.0
            corr = None
            if phi_u is not None and j == 0:
                u = eig_f.vectors[:, 0]
                corr = float(abs(np.dot(u, phi_u))
                             / (np.linalg.norm(u) * np.linalg.norm(phi_u)))
            cache[key] = (vals, unc, eig_f.vectors, op_f.grid, corr)
        vals, unc, vecs, rgrid, corr = cache[key]
        sectors.append(SectorEigen(
            j=j, mu=mu, values=vals, uncertainties=unc,
            neg_count=int(np.sum(vals < 0.0)), vectors=vecs, grid=rgrid,
            corr_phi=corr if j == 0 else None))
    eps0 = max(10.0 * max(float(s.uncertainties[0]) for s in sectors), 1e-6)
    kern = tuple((opname, s.j, float(v))
                 for s in sectors for v in s.values if abs(v) < eps0)
    return SpectrumReport(operator=opname, sectors=tuple(sectors),
                          resolutions=(grid_spec.n, fine.n),
                          eps0=eps0, kernel_candidates=kern)


def linearized_report(params: Params, profile: RadialProfile,
                      j_max: int | None = None, k: int = 3,
                      grid_spec: GridSpec | None = None) -> LinearizedReport:
    """Eigen-data of the two linearizations around a ground state.

    L1 has potential -gamma r^(-alpha) + omega - p phi^(p-1), L2 the same
    with coefficient 1 instead of p (so L2 phi = 0 identically).
    """
    if j_max is None:
        j_max = params.dim + 2
    if params.dim == 1:
        j_max = 1
    if grid_spec is None:
        grid_spec = GridSpec(r_max=30.0 * params.length_scale, n=4000)
    gam, al, om, p = (params.gamma, params.alpha, params.omega, params.p)

    def W1(r):
        base = om - p * profile.phi(r) ** (p - 1.0)
        if gam > 0.0:
            base = base - gam * np.power(r, -al)
        return base

    def W2(r):
        base = om - profile.phi(r) ** (p - 1.0)
        if gam > 0.0:
            base = base - gam * np.power(r, -al)
        return base

    # phi mapped to the symmetrized u variables on the fine grid, for the
    # L2 kernel correlation
    fine = grid_spec.refined()
    h = fine.r_max / fine.n
    r_f = (np.arange(1, fine.n + 1) - 0.5) * h
    phi_u = (profile.phi(r_f)
             * np.sqrt(np.power(r_f, params.dim - 1.0) * h))

    rep1 = _report_for("L1", params, W1, j_max, k, grid_spec, phi_u)
    rep2 = _report_for("L2", params, W2, j_max, k, grid_spec, phi_u)
    eps0 = max(rep1.eps0, rep2.eps0)
    return LinearizedReport(L1=rep1, L2=rep2, params=params, j_max=j_max,
                            eps0=eps0)


@dataclass(frozen=True)
class NondegeneracyVerdict:
    """PASS/FAIL with per-sector margins (distance of spectra from 0)."""

    status: str
    eps0: float
    margins: dict
    detail: str


def nondegeneracy_check(report: LinearizedReport) -> NondegeneracyVerdict:
    """Kernel triviality test for L1 across sectors.

    PASS requires: sector 0 of L1 has exactly one eigenvalue below -eps0
    and none inside (-eps0, eps0); every sector j >= 1 has its minimum
    eigenvalue above +eps0.  Raises Inconclusive when a Richardson
    uncertainty is larger than the distance of the deciding eigenvalue
    from the eps0 band.
    """
    need = report.params.dim + 1 if report.params.dim >= 2 else 1
    if report.j_max < need:
        raise ValidationError(
            f"nondegeneracy needs sectors through j = {need}, "
            f"got j_max = {report.j_max}")
    eps0 = report.eps0
    margins: dict[int, float] = {}
    failures: list[str] = []
    for s in report.L1.sectors:
        lam = s.values
        unc = s.uncertainties
        dist = np.abs(lam) - eps0
        m = float(np.min(dist))
        margins[s.j] = m
        deciding = int(np.argmin(dist))
        if abs(m) < float(unc[deciding]):
            raise Inconclusive(
                f"sector {s.j}: eigenvalue {lam[deciding]:.3e} sits within "
                f"its uncertainty {unc[deciding]:.1e} of the eps0 band "
                f"{eps0:.1e}")
        inside = np.sum(np.abs(lam) < eps0)
        if inside:
            failures.append(f"sector {s.j}: {inside} eigenvalue(s) inside "
                            f"(-eps0, eps0)")
        if s.j == 0:
            if s.neg_count != 1:
                failures.append(f"sector 0: {s.neg_count} negative "
                                "eigenvalue(s), expected exactly 1")
        elif lam[0] < eps0:
            failures.append(f"sector {s.j}: minimum eigenvalue "
                            f"{lam[0]:.3e} is not positive")
    if failures:
        return NondegeneracyVerdict(status="FAIL", eps0=eps0,
                                    margins=margins,
                                    detail="; ".join(failures))
    return NondegeneracyVerdict(status="PASS", eps0=eps0, margins=margins,
                                detail="kernel of the linearization is "
                                       "trivial at this resolution")
