"""Exception hierarchy."""


class LPNSError(Exception):
    """Base class for all package errors."""


class InvalidInputError(LPNSError, ValueError):
    """Malformed data: wrong shape, grid mismatch, nonzero mean where forbidden."""


class InvalidParameterError(LPNSError, ValueError):
    """A numeric parameter is outside its admissible range."""


class SymmetryError(InvalidInputError):
    """Spectrum violates Hermitian symmetry, so it is not the transform of a real field."""


class AliasingError(InvalidInputError):
    """Input bandwidth too large for an alias-free product on this grid."""


class CFLError(InvalidParameterError):
    """Time step exceeds the advective stability budget."""


class InstabilityError(LPNSError, RuntimeError):
    """Non-finite values appeared during time stepping."""

    def __init__(self, message, t_last):
        super().__init__(message)
        self.t_last = t_last
