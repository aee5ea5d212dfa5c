"""Exception hierarchy shared by every module."""


class CfineqError(Exception):
    """Base class for all library errors."""


class DomainError(CfineqError, ValueError):
    """An input lies outside the domain where a bound is defined."""


class DegenerateInput(CfineqError, ValueError):
    """The bound's construction is undefined for this input.

    When a well-defined degenerate answer exists (e.g. an all-zero
    sandwich) it is attached as ``result``.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConvergenceError(CfineqError, ArithmeticError):
    """An iterative kernel failed to reach its stopping criterion."""


class NotPositiveDefinite(CfineqError, ValueError):
    pass


class DimensionMismatch(CfineqError, ValueError):
    pass


class OrderingIndeterminate(CfineqError, ValueError):
    """Two matrices are not comparable in the Loewner order."""
