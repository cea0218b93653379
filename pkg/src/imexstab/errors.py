"""Exception hierarchy shared by the numerical modules."""


class StabilityError(ArithmeticError):
    """Base class for numerical failures of the stability analysis."""


class PoleError(StabilityError):
    """``z1`` sits (numerically) on a zero of the denominator."""


class SingularStageSystem(StabilityError):
    pass


class InterpolationError(StabilityError):
    """Coefficient extraction by interpolation was ill-conditioned."""


class NoRootOnRay(StabilityError):
    """No verified boundary radius up to the radius cap."""


class NotLStableAtInfinity(StabilityError):
    """``|R|`` exceeds 1 as ``|z1| -> infinity`` along the imaginary axis."""


class InteriorViolation(StabilityError):
    """The centre ``z2 = -1`` is not strictly inside the stability region."""


class DegenerateResultant(StabilityError):
    """The resultant vanishes identically (shared factor in ``y``)."""


class ContinuationSeedError(StabilityError):
    pass
