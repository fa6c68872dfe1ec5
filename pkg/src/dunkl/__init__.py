"""Planar Dunkl oscillator: spectra, separated wavefunctions, symmetry algebra and overlap coefficients."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DegeneracyError,
    DegenerateFamilyError,
    DomainError,
    DunklError,
    NumericalError,
    UsageError,
    ZeroFunctionError,
)
from .polykernel import MuParams  # noqa: E402
from .wavefunctions import CartesianIndex, JacobiDunklIndex, PolarIndex  # noqa: E402

__all__ = [
    "__version__",
    "MuParams",
    "CartesianIndex",
    "PolarIndex",
    "JacobiDunklIndex",
    "DunklError",
    "DomainError",
    "DegenerateFamilyError",
    "ZeroFunctionError",
    "UsageError",
    "DegeneracyError",
    "NumericalError",
]
