"""Exception types raised across the package."""


class DunklError(Exception):
    """Base class for all package errors."""


class DomainError(DunklError, ValueError):
    """A parameter lies outside the domain where the object is defined."""


class DegenerateFamilyError(DunklError, ValueError):
    """Recurrence coefficients do not define a positive-definite family."""


class ZeroFunctionError(DomainError):
    """The requested eigenfunction vanishes identically."""


class UsageError(DunklError, ValueError):
    """Arguments are individually valid but incompatible with each other."""


class DegeneracyError(DunklError, ArithmeticError):
    """Two eigenvalues are too close to label eigenvectors unambiguously."""


class NumericalError(DunklError, ArithmeticError):
    """A numerical routine failed to converge."""
