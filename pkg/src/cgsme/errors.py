"""Exception hierarchy shared by all modules."""


class CGSMEError(Exception):
    """Base class for errors raised by this package."""


class DomainError(CGSMEError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class ConvergenceError(CGSMEError, ArithmeticError):
    """A quadrature or iteration failed to meet its tolerance."""


class DegenerateFrequencies(CGSMEError, ValueError):
    """Closed form has a 0/0 at coinciding frequencies; use the diagonal route."""


class StepSizeError(CGSMEError, ValueError):
    pass


class NonUnitaryError(CGSMEError, ArithmeticError):
    """Amplitudes left the physical region |c0|^2 + |c1|^2 + |c2|^2 <= 1."""


class NumericalError(CGSMEError, ArithmeticError):
    pass


class PictureError(CGSMEError, ValueError):
    pass


class GridMismatch(CGSMEError, ValueError):
    pass


class BoundaryError(CGSMEError, RuntimeError):
    """Minimizer landed on the edge of the search interval."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigError(CGSMEError, ValueError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field
