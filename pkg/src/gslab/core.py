"""Problem definitions for the radial ground-state equation.

The equation solved throughout the package is the radial form of

    -Delta(phi) - gamma |x|^(-alpha) phi + omega phi - phi^p = 0,   x in R^N,

i.e.

    phi'' + (N-1)/r phi' - (omega - gamma r^(-alpha)) phi + phi^p = 0,

together with its generalization phi'' + (f'/f) phi' - g phi + h phi^p = 0
for a coefficient triple (f, g, h).  The admissible parameter set is

    N >= 1,  gamma > 0,  0 < alpha < min(N, 2),  1 < p < 2N/(N-2) - 1,

with no upper bound on p for N in {1, 2}, plus the frequency condition
omega > omega0 where -omega0 is the lowest eigenvalue of the linear operator
-Delta - gamma |x|^(-alpha).  omega0 is a computed quantity (see
:mod:`gslab.spectrum`), so it is validated lazily: :func:`make_params` leaves
it unset and operations that mathematically need omega > omega0 check the
slot when present.

gamma = 0 is deliberately rejected by :func:`make_params` but admitted when a
``Params`` is constructed directly: the classical potential-free limit is the
test oracle for most of the machinery (its 1D version is the closed-form
sech soliton of :func:`soliton_1d`).

Conventions: f(r) = r^(N-1) exactly for the special case (no surface-measure
factor); the measure |S^(N-1)| enters only the full-space integrals of
:mod:`gslab.stability`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import (AlphaOutOfRange, DimensionInvalid, ExponentOutOfRange,
                     NonpositiveGamma, OutOfRange, ValidationError)
from .numerics import graded_grid

__all__ = [
    "Params", "FghTriple", "RadialProfile", "ScaleReport",
    "make_params", "special_fgh", "rescale_to_unit_omega", "soliton_1d",
    "default_profile_grid",
]


@dataclass(frozen=True)
class Params:
    """The parameter quintuple (N, gamma, alpha, omega, p).

    ``omega0`` is the computed lower frequency bound; it is ``None`` until
    filled (see :func:`gslab.spectrum.omega0` and :meth:`with_omega0`).
    Direct construction performs no validation; that is the documented
    bypass for gamma = 0 oracle paths. Use :func:`make_params` for user
    input.
    """

    dim: int
    gamma: float
    alpha: float
    omega: float
    p: float
    omega0: float | None = None

    def with_omega0(self, value: float) -> "Params":
        """Return a copy with the computed threshold filled in."""
        return replace(self, omega0=float(value))

    def with_omega(self, omega: float) -> "Params":
        """Return a copy at a different frequency (omega0 kept)."""
        return replace(self, omega=float(omega))

    @property
    def length_scale(self) -> float:
        """Natural radial scale 1/sqrt(omega) (used for grid defaults)."""
        return 1.0 / math.sqrt(self.omega)

    @property
    def p_upper(self) -> float:
        """Upper exponent bound 2N/(N-2) - 1, inf for N in {1, 2}."""
        if self.dim <= 2:
            return math.inf
        return 2.0 * self.dim / (self.dim - 2.0) - 1.0


def make_params(dim: int, gamma: float, alpha: float, omega: float,
                p: float) -> Params:
    """Validate and build a :class:`Params`.

    Enforces every static constraint of the admissible set; the
    omega > omega0 clause is deferred because omega0 must itself be
    computed.

    Raises
    ------
    DimensionInvalid, NonpositiveGamma, AlphaOutOfRange, ExponentOutOfRange
    """
    values = (gamma, alpha, omega, p)
    if not all(math.isfinite(v) for v in values):
        raise ValidationError(f"non-finite parameter in {values}")
    if not (isinstance(dim, (int, np.integer)) and not isinstance(dim, bool)) or dim < 1:
        raise DimensionInvalid(f"dim must be a positive integer, got {dim!r}")
    if gamma <= 0.0:
        raise NonpositiveGamma(f"gamma must be > 0, got {gamma}")
    amax = min(dim, 2)
    if not (0.0 < alpha < amax):
        raise AlphaOutOfRange(
            f"alpha must satisfy 0 < alpha < min(N, 2) = {amax}, got {alpha}")
    pmax = math.inf if dim <= 2 else 2.0 * dim / (dim - 2.0) - 1.0
    if not (1.0 < p < pmax):
        raise ExponentOutOfRange(
            f"p must satisfy 1 < p < {pmax} for N = {dim}, got {p}")
    return Params(int(dim), float(gamma), float(alpha), float(omega), float(p))


@dataclass(frozen=True)
class FghTriple:
    """Coefficient triple (f, g, h) with derivative evaluators.

    Each entry is a vectorized callable on (0, inf).  Third derivatives of
    f and h and the first derivative of g are what the Pohozaev
    coefficients consume; all twelve slots are carried for uniformity.
    ``descriptor`` tags the special case so downstream code can pick
    closed-form routes.
    """

    f: Callable
    df: Callable
    d2f: Callable
    d3f: Callable
    g: Callable
    dg: Callable
    d2g: Callable
    d3g: Callable
    h: Callable
    dh: Callable
    d2h: Callable
    d3h: Callable
    descriptor: str = "generic"

    def check_positivity(self, rs) -> bool:
        """f > 0 and h > 0 on the sample points."""
        rs = np.asarray(rs, dtype=float)
        return bool(np.all(self.f(rs) > 0.0) and np.all(self.h(rs) > 0.0))


def special_fgh(params: Params) -> FghTriple:
    """The triple f = r^(N-1), g = omega - gamma r^(-alpha), h = 1."""
    n1 = params.dim - 1.0
    gam, al, om = params.gamma, params.alpha, params.omega

    def powc(c: float, e: float) -> Callable:
        if c == 0.0:
            return lambda r: np.zeros_like(np.asarray(r, dtype=float))
        return lambda r: c * np.asarray(r, dtype=float) ** e

    f = powc(1.0, n1)
    df = powc(n1, n1 - 1.0)
    d2f = powc(n1 * (n1 - 1.0), n1 - 2.0)
    d3f = powc(n1 * (n1 - 1.0) * (n1 - 2.0), n1 - 3.0)

    def g(r):
        r = np.asarray(r, dtype=float)
        return om - gam * r ** (-al)

    dg = powc(gam * al, -al - 1.0)
    d2g = powc(-gam * al * (al + 1.0), -al - 2.0)
    d3g = powc(gam * al * (al + 1.0) * (al + 2.0), -al - 3.0)

    one = lambda r: np.ones_like(np.asarray(r, dtype=float))
    zero = lambda r: np.zeros_like(np.asarray(r, dtype=float))
    return FghTriple(f, df, d2f, d3f, g, dg, d2g, d3g, one, zero, zero, zero,
                     descriptor="special")


@dataclass(frozen=True)
class RadialProfile:
    """A radial function phi on a graded grid with an exponential tail model.

    ``grid`` holds r_1 < ... < r_M (all positive), ``values`` phi(r_i) and
    ``derivs`` phi'(r_i); ``phi0`` is the value at r = 0 and ``tail`` the
    pair (amplitude, rate) modeling phi(r) ~ amplitude * exp(-rate * r) for
    r > r_M.  Ground-state profiles are positive and strictly decreasing;
    partial shot profiles (bracket endpoints) carry ``partial=True`` and a
    placeholder tail.
    """

    grid: np.ndarray
    values: np.ndarray
    derivs: np.ndarray
    phi0: float
    tail: tuple[float, float]
    params: Params
    partial: bool = False
    _cache: dict = field(default_factory=dict, init=False, repr=False,
                          compare=False)

    @property
    def r_last(self) -> float:
        return float(self.grid[-1])

    def _splines(self):
        if "splines" not in self._cache:
            from scipy.interpolate import CubicSpline, PchipInterpolator
            r = np.concatenate([[0.0], self.grid])
            v = np.concatenate([[self.phi0], self.values])
            self._cache["splines"] = (
                CubicSpline(self.grid, self.values),
                CubicSpline(self.grid, self.derivs),
                PchipInterpolator(r, v),
            )
        return self._cache["splines"]

    def phi(self, r):
        """phi(r) for r >= 0: monotone interpolation inside the grid,
        tail model beyond."""
        r = np.asarray(r, dtype=float)
        _, _, pchip = self._splines()
        amp, rate = self.tail
        out = np.where(r <= self.r_last, pchip(np.minimum(r, self.r_last)),
                       amp * np.exp(-rate * r))
        return out if out.ndim else float(out)

    def phi_smooth(self, r):
        """Cubic-spline evaluation of phi for r in [r_1, r_M], tail beyond;
        raises OutOfRange below the first grid point (no extrapolation
        toward the origin)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < self.grid[0]):
            raise OutOfRange(f"r below first grid point {self.grid[0]:g}")
        spl, _, _ = self._splines()
        amp, rate = self.tail
        out = np.where(r <= self.r_last, spl(np.minimum(r, self.r_last)),
                       amp * np.exp(-rate * r))
        return out if out.ndim else float(out)

    def dphi_smooth(self, r):
        """Cubic-spline evaluation of phi' (same domain as phi_smooth)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < self.grid[0]):
            raise OutOfRange(f"r below first grid point {self.grid[0]:g}")
        _, dspl, _ = self._splines()
        amp, rate = self.tail
        out = np.where(r <= self.r_last, dspl(np.minimum(r, self.r_last)),
                       -rate * amp * np.exp(-rate * r))
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class ScaleReport:
    """Solution map between a problem at frequency omega and its omega = 1
    normal form.

    If phi solves the original equation then
    phi_tilde(x) = omega^(-1/(p-1)) phi(x / sqrt(omega)) solves the unit
    frequency equation with gamma_tilde = omega^((alpha-2)/2) gamma, and
    conversely.  ``amplitude_factor`` = omega^(1/(p-1)) and
    ``spatial_factor`` = sqrt(omega) encode the inverse map.
    """

    original: Params
    rescaled: Params
    amplitude_factor: float
    spatial_factor: float

    def to_original(self, unit_profile: RadialProfile) -> RadialProfile:
        """Map a profile of the unit-omega problem back to the original."""
        amp, rate = unit_profile.tail
        return RadialProfile(
            grid=unit_profile.grid / self.spatial_factor,
            values=self.amplitude_factor * unit_profile.values,
            derivs=self.amplitude_factor * self.spatial_factor * unit_profile.derivs,
            phi0=self.amplitude_factor * unit_profile.phi0,
            tail=(self.amplitude_factor * amp, rate * self.spatial_factor),
            params=self.original,
            partial=unit_profile.partial,
        )


def rescale_to_unit_omega(params: Params) -> ScaleReport:
    """Normal form at omega = 1: gamma_tilde = omega^((alpha-2)/2) gamma."""
    if not params.omega > 0.0:
        raise ValueError("rescaling needs omega > 0")
    om = params.omega
    gtil = om ** ((params.alpha - 2.0) / 2.0) * params.gamma
    rescaled = replace(params, gamma=gtil, omega=1.0, omega0=None)
    return ScaleReport(
        original=params,
        rescaled=rescaled,
        amplitude_factor=om ** (1.0 / (params.p - 1.0)),
        spatial_factor=math.sqrt(om),
    )


def default_profile_grid(omega: float, r_max: float | None = None,
                         r0: float | None = None) -> np.ndarray:
    """Standard storage grid for profiles at frequency omega."""
    scale = 1.0 / math.sqrt(omega)
    if r_max is None:
        r_max = 30.0 * scale
    if r0 is None:
        r0 = 1e-6 * scale
    # every length scales with 1/sqrt(omega) so that grids at different
    # omega are similar; omega-derivatives of quadratures then see the
    # discretization bias cancel instead of masquerading as a slope
    return graded_grid(r0, r_max, breakpoint=min(scale, r_max / 2.0),
                       ratio=1.05, du=0.01 * scale)


def soliton_1d(omega: float, p: float) -> RadialProfile:
    """Closed-form line soliton, the gamma = 0, N = 1 oracle.

        phi(r) = [(p+1) omega / 2]^(1/(p-1)) sech^(2/(p-1))((p-1) sqrt(omega) r / 2)

    solves -phi'' + omega phi - phi^p = 0 with phi'(0) = 0; the decay rate
    is exactly sqrt(omega).
    """
    if omega <= 0.0 or p <= 1.0:
        raise ValueError("need omega > 0 and p > 1")
    m = 2.0 / (p - 1.0)
    k = (p - 1.0) * math.sqrt(omega) / 2.0   # m * k = sqrt(omega)
    amp = ((p + 1.0) * omega / 2.0) ** (1.0 / (p - 1.0))
    grid = default_profile_grid(omega)
    sech = 1.0 / np.cosh(k * grid)
    values = amp * sech ** m
    derivs = -math.sqrt(omega) * values * np.tanh(k * grid)
    params = Params(dim=1, gamma=0.0, alpha=0.5, omega=float(omega),
                    p=float(p), omega0=0.0)
    return RadialProfile(grid=grid, values=values, derivs=derivs,
                         phi0=amp, tail=(amp * 2.0 ** m, math.sqrt(omega)),
                         params=params)
