"""Exception types shared across the package."""


class WaringError(Exception):
    """Base class for all errors raised by ternary_waring."""


class Inconsistent(WaringError):
    """An exact linear system has no solution."""


class PreconditionViolated(WaringError, ValueError):
    """An input violates the documented precondition of an operation."""


class ZeroForm(PreconditionViolated):
    """The zero form was passed where a nonzero form is required."""


class PowerInput(PreconditionViolated):
    """A form that must not be a pure power of a linear form is one."""


class GenericChoiceFailed(WaringError):
    """A randomly sampled choice landed in the bad (non-generic) locus.

    Recoverable: callers resample.
    """


class RetryBudgetExhausted(WaringError):
    """Sampling did not find a generic choice within the configured budget."""


class InvariantViolation(WaringError):
    """A state handed to the recursion fails its own documented checks."""
