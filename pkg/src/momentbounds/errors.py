"""Exception hierarchy. Every domain error derives from MomentBoundsError."""


class MomentBoundsError(ValueError):
    """Base class for all domain errors raised by this package."""


class InvalidDistribution(MomentBoundsError):
    pass


class NonFiniteValues(InvalidDistribution):
    pass


class DegenerateDistribution(MomentBoundsError):
    """A standardized moment was requested for a zero-variance distribution."""


class OrderOutOfRange(MomentBoundsError):
    pass


class EmptyMixture(MomentBoundsError):
    pass


class BadWeights(MomentBoundsError):
    pass


class ZeroScale(MomentBoundsError):
    pass


class BadEta(MomentBoundsError):
    """Size ratio must exceed 1; use the (1/eta, 1-q) equivalent instead."""


class InvalidBidisperse(MomentBoundsError):
    """Two-point parameters violate a_minus < mean < a_plus or 0 < q < 1."""


class NonPositiveMean(MomentBoundsError):
    pass


class NonPositiveCov(MomentBoundsError):
    pass


class ZeroZ(MomentBoundsError):
    pass


class NoSolution(MomentBoundsError):
    pass


class ConvergenceFailure(MomentBoundsError):
    pass


class InvalidSupport(MomentBoundsError):
    pass


class MeanOutsideSupport(MomentBoundsError):
    pass


class InfeasibleSpread(MomentBoundsError):
    """The standard deviation is larger than the support and mean allow."""


class TooFewPoints(MomentBoundsError):
    pass


class NotThreePoints(MomentBoundsError):
    pass


class MeanDegenerate(MomentBoundsError):
    pass


class SamplingExhausted(MomentBoundsError):
    pass


class InvalidConfig(MomentBoundsError):
    pass


class TooManyPoints(MomentBoundsError):
    pass
