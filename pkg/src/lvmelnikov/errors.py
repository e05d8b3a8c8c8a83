"""Exception hierarchy shared by all modules."""


class MelnikovError(Exception):
    """Base class for every error raised by the package."""


class InvalidParams(MelnikovError, ValueError):
    pass


class IncompatibleTag(MelnikovError, ValueError):
    pass


class OutsideAnnulus(MelnikovError, ValueError):
    pass


class NonConvergence(MelnikovError, RuntimeError):
    pass


class UnsupportedK(MelnikovError, ValueError):
    pass


class DegreeMismatch(MelnikovError, ValueError):
    pass


class StepTooSmall(MelnikovError, ValueError):
    pass


class DegenerateAllZero(MelnikovError, ValueError):
    """All Melnikov coefficients vanish, so M is identically zero."""


class Unachievable(MelnikovError, ValueError):
    pass


class TargetImpossible(MelnikovError):
    """Raised for configurations excluded by the shared-inflection argument.

    ``certificate`` carries the evidence as a plain dict.
    """

    def __init__(self, message, certificate):
        super().__init__(message)
        self.certificate = certificate


class IntegrationFailure(MelnikovError, RuntimeError):
    pass


class LeftAnnulus(MelnikovError, RuntimeError):
    pass
