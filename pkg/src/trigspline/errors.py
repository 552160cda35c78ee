"""Exception hierarchy.

Every error raised by the library derives from :class:`TrigSplineError`, and
each family also derives from the matching builtin (``ValueError`` or
``ArithmeticError``) so callers can catch either way.
"""


class TrigSplineError(Exception):
    """Base class for all library errors."""


class InvalidArgumentError(TrigSplineError, ValueError):
    pass


class InvalidGridError(InvalidArgumentError):
    pass


class SamplingError(TrigSplineError, ValueError):
    pass


class ParseError(TrigSplineError, ValueError):
    """Malformed sample, spectrum or spline input."""

    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class OrderOutOfRangeError(InvalidArgumentError):
    pass


class IncompatibilityError(TrigSplineError, ValueError):
    """Objects built on different grids or sizes were combined."""


class InvalidStateError(TrigSplineError, ValueError):
    pass


class InvalidFilterError(InvalidArgumentError):
    pass


class MathError(TrigSplineError, ArithmeticError):
    """Numerical failure: a series or factor could not be evaluated safely."""


class ConvergenceError(MathError):
    def __init__(self, message, bound=None):
        self.bound = bound
        super().__init__(message)


class DegenerateFactorError(MathError):
    def __init__(self, message, value=None):
        self.value = value
        super().__init__(message)


class NonconvergentDerivativeError(MathError):
    pass


class QuadratureError(MathError):
    pass
