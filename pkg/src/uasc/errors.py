"""Exception hierarchy shared by the solvers and the harness."""


class UASCError(Exception):
    """Base class for every error raised by this package."""

    reason = "error"


class StructuralError(UASCError, ValueError):
    """A field does not match its grid, or arguments are malformed."""

    reason = "structural"


class NonFiniteMultiplierError(UASCError, FloatingPointError):
    reason = "nonfinite_multiplier"


class StepTooLargeError(UASCError):
    """Semi-Lagrangian fixed point map is not contracting for this step."""

    reason = "step_too_large"


class LogGuardError(UASCError):
    """Cole-Hopf logarithm argument left the safe disc around 1."""

    reason = "log_guard"


class IrreversibleStepError(UASCError):
    """A parabolic flow was asked to run with negative real time."""

    reason = "irreversible_step"


class OracleFailure(UASCError):
    reason = "oracle_failure"


class RefusalError(UASCError):
    """Parameters outside the validity range of a method (e.g. eps = 0)."""

    reason = "refused"


class ResourceLimitError(UASCError):
    reason = "resource_limit"


class UndefinedMetricError(UASCError, ZeroDivisionError):
    """Relative error requested against a reference of zero norm."""

    reason = "undefined_metric"
