"""Exception hierarchy shared by the solver modules."""


class BallEigError(Exception):
    """Base class for all solver errors."""


class DomainError(BallEigError, ValueError):
    """A point lies outside the set an operation is defined on."""


class SingularMapError(BallEigError):
    """The Jacobian of a domain map is (numerically) singular."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class InversionError(BallEigError):
    """Iterative inversion of a domain map did not converge."""


class CoefficientError(BallEigError, ValueError):
    """Operator coefficients violate symmetry, ellipticity or sign rules."""


class DefinitenessError(BallEigError):
    """A matrix expected to be positive definite is not."""

    def __init__(self, message, pivot=None):
        super().__init__(message)
        self.pivot = pivot


class SingularSystemError(BallEigError):
    """A linear system has a (numerically) singular matrix."""


class ConfigError(BallEigError, ValueError):
    """Invalid run configuration."""
