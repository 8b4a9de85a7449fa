"""Exception types raised across the package."""


class FlagCkmError(Exception):
    """Base class for all package errors."""


class ShapeError(FlagCkmError, ValueError):
    """Matrix dimensions are incompatible with the requested operation."""


class ValidationError(FlagCkmError, ValueError):
    """An input violates a documented precondition (non-unitary, non-finite, ...)."""


class SingularPivotError(FlagCkmError, ArithmeticError):
    """A leading principal minor vanished during unpivoted elimination.

    ``index`` is the 1-based size of the failing leading minor.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class GaugeSingularError(SingularPivotError):
    """The unitary lies outside the coordinate chart (a leading minor vanishes)."""


class NotRepresentableError(FlagCkmError, ValueError):
    """Coordinates have no preimage under the standard-angle correspondence."""


class DegenerateSpectrumError(ValidationError):
    """Masses are not strictly increasing."""


class ParityError(FlagCkmError, ArithmeticError):
    """A commutator determinant is neither clearly real nor clearly imaginary."""
