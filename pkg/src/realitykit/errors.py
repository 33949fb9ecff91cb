"""Exception hierarchy shared by every realitykit module."""


class RealityKitError(Exception):
    """Base class for all errors raised by realitykit."""


class NotHermitian(RealityKitError, ValueError):
    pass


class NotPositive(RealityKitError, ValueError):
    pass


class NotNormalized(RealityKitError, ValueError):
    pass


class LayoutMismatch(RealityKitError, ValueError):
    pass


class DomainError(RealityKitError, ValueError):
    """A scalar function is undefined at a surviving eigenvalue."""


class BadRank(RealityKitError, ValueError):
    pass


class InvalidObservable(RealityKitError, ValueError):
    """Projectors are not rank-1, orthogonal and complete, or the spectrum is degenerate."""


class ParameterOutOfRange(RealityKitError, ValueError):
    pass


class EpsilonOutOfRange(ParameterOutOfRange):
    pass


class AlphaOutOfRange(ParameterOutOfRange):
    pass


class QOutOfRange(ParameterOutOfRange):
    pass


class KernelViolation(RealityKitError, ArithmeticError):
    """ker(sigma) is not contained in ker(rho); the divergence is +inf."""


class CannotDiscardObservableSubsystem(RealityKitError, ValueError):
    pass


class OptimizerNonConvergence(RealityKitError, RuntimeError):
    """Raised in strict mode; ``best_value`` holds the best objective value reached."""

    def __init__(self, message, best_value=None):
        super().__init__(message)
        self.best_value = best_value


class ConfigError(RealityKitError, ValueError):
    pass
