"""Exception types raised across the package."""


class ValidationError(ValueError):
    """Input object violates a documented invariant."""


class NotPSDError(ValidationError):
    """A matrix that must be positive semidefinite is not (beyond tolerance)."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(f"{message} (min eigenvalue {min_eigenvalue:.3e})")
        self.min_eigenvalue = min_eigenvalue


class InvalidSpectrumError(ValueError):
    """Symmetric-polynomial data does not correspond to a real nonnegative spectrum."""


class BoundaryProximityError(InvalidSpectrumError):
    """A finite-difference stencil left the realizable region of s-space."""


class ConfluenceError(ValueError):
    """Coincident nodes where the operation needs distinct ones, or derivatives are missing."""


class NumericalIntegrityError(ArithmeticError):
    """A quantity that must be real came out with a significant imaginary part."""
