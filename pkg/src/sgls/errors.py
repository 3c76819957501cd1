"""Exception hierarchy shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can emit
single-line, parseable error prefixes and map failures to exit codes.
"""


class SglsError(Exception):
    """Base class for all library errors."""

    code = "error"


class SupportIntervalError(SglsError, ValueError):
    """Generating-function support (a, b) is not a valid interval with a >= 1."""

    code = "support-interval"


class PositivityError(SglsError, ValueError):
    """A quantity that must be strictly positive is not."""

    code = "positivity"


class UnsupportedFamilyError(SglsError, ValueError):
    """Requested generating-function family cannot be built from the parameters."""

    code = "unsupported-family"


class DerivativeOrderError(SglsError, ValueError):
    """Requested derivative order exceeds what the field (or extension) provides."""

    code = "derivative-order"


class OutOfDomainError(SglsError, ValueError):
    """Evaluation requested outside the region where the field is defined."""

    code = "out-of-domain"


class ExponentError(SglsError, ValueError):
    """Integrability exponent p outside [1, inf)."""

    code = "exponent"


class TruncationError(SglsError, ValueError):
    """Unbounded-domain norm requested without a decay certificate or explicit box."""

    code = "truncation"


class QuadratureConvergenceError(SglsError, RuntimeError):
    """Panel refinements did not reach the requested agreement.

    Carries the last two estimates so callers can report or degrade gracefully.
    """

    code = "quadrature-convergence"

    def __init__(self, message: str, coarse: float, fine: float):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class CoefficientOrderError(SglsError, ValueError):
    """Smoothness order outside the supported policy range for exact coefficients."""

    code = "coefficient-order"


class NormInconsistencyError(SglsError, RuntimeError):
    """A sup-over-p search returned all-zero ratios for a field that is not zero."""

    code = "norm-inconsistency"


class BoundViolationError(SglsError, RuntimeError):
    """An observed norm ratio exceeded its guaranteed bound beyond tolerance."""

    code = "bound-violation"


class ConfigError(SglsError, ValueError):
    """Invalid run configuration (file contents or flag values)."""

    code = "config"
