"""Exception types raised across the package."""


class EsgboError(Exception):
    """Base class for all package errors."""


class MalformedInputError(EsgboError, ValueError):
    """Input data violates a documented invariant (shape, range, ordering)."""


class ConfigError(EsgboError, ValueError):
    """A configuration value is missing, unparsable or out of range."""


class DegenerateRiskError(EsgboError, ArithmeticError):
    """Portfolio standard deviation is zero, so the Sharpe ratio is undefined."""


class NumericalConditioningError(EsgboError, ArithmeticError):
    """Covariance factorization failed even after jitter escalation."""


class RunAbortedError(EsgboError, RuntimeError):
    """The objective raised during an optimization run.

    The trace collected up to the failure is kept on ``partial_trace``.
    """

    def __init__(self, message, partial_trace):
        super().__init__(message)
        self.partial_trace = partial_trace
