"""Exception types shared across the package."""


class QsumError(Exception):
    """Base class for all qsum-specific errors."""


class PrecisionMismatch(QsumError):
    """Two high-precision values from different precision contexts were mixed."""


class PoleError(QsumError):
    """A denominator factor vanished where a finite value was required.

    Carries enough detail (parameter, summation index, offending factor)
    to point at the codimension-one pole set that was hit.
    """

    def __init__(self, message, *, param=None, index=None, factor=None):
        super().__init__(message)
        self.param = param
        self.index = index
        self.factor = factor


class PoleAtPoint(PoleError):
    """A rational function was evaluated at (or too near) a pole."""


class DomainError(QsumError):
    """Input outside the domain of validity (divergent base, bad window, ...)."""


class NonConvergence(QsumError):
    """A numeric summation hit the term cap before its stopping rule fired."""


class ConstraintUnsatisfiable(QsumError):
    """An identity's parameter constraint cannot be met by the given values."""


class MissingParam(QsumError):
    """A required free parameter was not supplied."""


class SubstitutionError(QsumError):
    """A substitution rule left the monomial parameter form."""


class SweepFailure(QsumError):
    """A randomized verification sweep produced at least one failing instance."""

    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)
