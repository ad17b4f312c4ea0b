"""Exception types shared across the package."""


class DetMomentsError(Exception):
    """Base class for every error raised by this package."""


class NotTerminating(DetMomentsError):
    """No bound numerator parameter is a nonpositive integer."""


class PoleBeforeTermination(DetMomentsError):
    """A denominator Pochhammer symbol vanishes before the series terminates."""


class UnsupportedScenario(DetMomentsError):
    pass


class UnsupportedAlpha(DetMomentsError):
    pass


class NotAvailable(DetMomentsError):
    """Requested an F2 order for which no closed form is known."""


class NoFit(DetMomentsError):
    pass


class AmbiguousFit(DetMomentsError):
    pass


class PrecisionInsufficient(DetMomentsError):
    pass


class ToleranceNotMet(DetMomentsError):
    pass


class DomainError(DetMomentsError):
    pass
