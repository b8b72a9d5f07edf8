"""Exception hierarchy shared across the package."""


class DualCalcError(Exception):
    """Base class for all library errors."""

    code = "error"


class NonFiniteError(DualCalcError, ArithmeticError):
    code = "non_finite"


class ZeroDivisorError(DualCalcError, ZeroDivisionError):
    """Raised when inverting a dual number whose real part is zero."""

    code = "zero_divisor"


class DomainError(DualCalcError, ValueError):
    """A function was evaluated outside its domain (log, division)."""

    code = "domain"

    def __init__(self, message, subexpression=None):
        super().__init__(message)
        self.subexpression = subexpression


class ParseError(DualCalcError, ValueError):
    code = "parse"

    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class InvalidIntervalError(DualCalcError, ValueError):
    code = "invalid_interval"


class InvalidPartitionError(DualCalcError, ValueError):
    code = "invalid_partition"


class InvalidEpsilon(DualCalcError, ValueError):
    code = "invalid_epsilon"


class PreconditionFailed(DualCalcError, ValueError):
    code = "precondition"


class MaxDepthExceeded(DualCalcError):
    """Refinement stopped at max depth before the gap met the tolerance.

    The best estimate reached is kept on ``estimate``.
    """

    code = "max_depth"

    def __init__(self, message, estimate):
        super().__init__(message)
        self.estimate = estimate
