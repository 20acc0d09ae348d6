"""Exception hierarchy.

Every domain failure raises a subclass of :class:`RegPrimError`; the class
name is what the command line prints on stderr.
"""


class RegPrimError(ValueError):
    """Base class for all domain errors raised by this package."""


class ZeroPolynomial(RegPrimError):
    pass


class UnboundedPiece(RegPrimError):
    pass


class UnboundedAtInfinity(RegPrimError):
    pass


class DegenerateAffine(RegPrimError):
    pass


class NotVanishingAtNegInf(RegPrimError):
    pass


class NotLeftContinuous(RegPrimError):
    pass


class NotNormalized(RegPrimError):
    pass


class NotInIBVn(RegPrimError):
    pass


class OrderMismatch(RegPrimError):
    pass


class LambdaMismatch(RegPrimError):
    pass


class OrderTooHigh(RegPrimError):
    pass


class NotSmoothEnough(RegPrimError):
    pass


class NotCompactSupport(RegPrimError):
    pass


class DegreeTooHigh(RegPrimError):
    pass


class NotInTargetSpace(RegPrimError):
    pass


class NotMonotone(RegPrimError):
    pass


class NotContinuousPrimitive(RegPrimError):
    pass


class ExponentTooSmall(RegPrimError):
    pass


class NotNonnegative(RegPrimError):
    pass


class NoConvergence(RegPrimError):
    pass
