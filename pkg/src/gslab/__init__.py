"""Ground states of the stationary NLS with an inverse-power potential.

Compute positive radial ground states by shooting, verify the Pohozaev
monotonicity identity behind the uniqueness theorem, certify the
condition groups (I)-(V), probe the linearized operators for
nondegeneracy, and trace mass/slope stability criteria in omega.
"""

from .core import (FghTriple, Params, RadialProfile, ScaleReport,
                   default_profile_grid, make_params, rescale_to_unit_omega,
                   soliton_1d, special_fgh)
from .errors import (GslabError, NumericError, ValidationError)
from .shooting import (OutcomeKind, ShootOutcome, auto_bracket,
                       find_ground_state, integrate_outward, series_start)
from .pohozaev import (PohozaevCoeffs, coeffs, J, verify_identity, eta_and_X)
from .spectrum import (GridSpec, linearized_report, lowest_eigenpairs,
                       mu_ladder, nondegeneracy_check, omega0)
from .stability import (StabilityRecord, SweepResult, classify, functionals,
                        mass_slope, sweep)
from .assumptions import (ConditionReport, GSignStructure, check_all,
                          g_sign_structure, limit_conditions)

__version__ = "0.1.0"

__all__ = [
    "Params", "make_params", "FghTriple", "special_fgh", "RadialProfile",
    "ScaleReport", "rescale_to_unit_omega", "default_profile_grid",
    "soliton_1d",
    "OutcomeKind", "ShootOutcome", "series_start", "integrate_outward",
    "auto_bracket", "find_ground_state",
    "PohozaevCoeffs", "coeffs", "J", "verify_identity", "eta_and_X",
    "GridSpec", "mu_ladder", "lowest_eigenpairs", "omega0",
    "linearized_report", "nondegeneracy_check",
    "StabilityRecord", "SweepResult", "functionals", "mass_slope",
    "classify", "sweep",
    "ConditionReport", "GSignStructure", "check_all", "g_sign_structure",
    "limit_conditions",
    "GslabError", "ValidationError", "NumericError",
    "__version__",
]
