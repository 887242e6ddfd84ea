"""Exception hierarchy shared by all solver modules."""


class PotError(Exception):
    """Base class for every error raised by potgame."""


class DimensionMismatch(PotError, ValueError):
    pass


class ParseError(PotError, ValueError):
    pass


class ValidationError(PotError, ValueError):
    pass


class DegenerateSignal(PotError):
    """A signal is sent with probability zero."""

    def __init__(self, signal):
        super().__init__(f"signal {signal} has zero probability")
        self.signal = signal


class PlausibilityViolation(PotError):
    """Posterior beliefs do not average back to the prior."""


class NoBeliefDominantPbe(PotError):
    """Stage-2 selection is infeasible: the prior is outside the hull of equilibrium beliefs."""


class NotBinary(PotError, ValueError):
    pass


class RatioUndefined(PotError):
    pass


class ZeroOpValue(RatioUndefined):
    pass


class BoundaryPrior(PotError):
    pass


class NonPositiveBias(PotError, ValueError):
    pass


class PartitionTooFine(PotError, ValueError):
    pass


class GridTooSmall(PotError, ValueError):
    pass
