"""Exception hierarchy for gslab.

Two broad families matter to callers: validation errors (bad parameters or
malformed inputs, CLI exit code 2) and numeric failures (a computation that
started from valid inputs but could not finish, CLI exit code 3).
"""

from __future__ import annotations


class GslabError(Exception):
    """Base class for all package errors."""


class ValidationError(GslabError):
    """Inputs rejected before any computation ran."""


class NumericError(GslabError):
    """A numeric procedure failed to produce a trustworthy result."""


# --- parameter validation -------------------------------------------------

class DimensionInvalid(ValidationError):
    pass


class NonpositiveGamma(ValidationError):
    pass


class AlphaOutOfRange(ValidationError):
    pass


class ExponentOutOfRange(ValidationError):
    pass


class OmegaNotAboveThreshold(ValidationError):
    """omega <= omega0: the equation has no positive decaying solution."""


# --- shooting -------------------------------------------------------------

class StartRadiusTooLarge(ValidationError):
    """Series start rejected: the neglected next-order term is too big."""


class StepUnderflow(NumericError):
    pass


class NonFiniteState(NumericError):
    pass


class InvalidBracket(ValidationError):
    pass


class BracketNotFound(NumericError):
    pass


class NoConvergence(NumericError):
    pass


# --- pohozaev -------------------------------------------------------------

class DerivativeUnavailable(ValidationError):
    """Generic coefficients need f''', h''' and g'; the triple lacks them."""


class OutOfRange(ValidationError):
    """Evaluation requested below the first stored grid point."""


class QuadratureFailure(NumericError):
    pass


# --- spectrum -------------------------------------------------------------

class GridTooCoarse(ValidationError):
    pass


class SingularityUnresolved(NumericError):
    """First-cell average of the singular potential is too far from the
    midpoint value: the grid cannot represent the singularity."""


class ConvergenceFailure(NumericError):
    pass


class NoNegativeEigenvalue(NumericError):
    """No bound state found; the grid or r_max is too small."""


class Inconclusive(NumericError):
    """A verdict cannot be called: uncertainty exceeds the margin."""


# --- assumptions ----------------------------------------------------------

class RootPolishFailure(NumericError):
    pass


# --- cli / persistence -----------------------------------------------------

class SchemaMismatch(ValidationError):
    pass


class InvariantViolation(ValidationError):
    pass
