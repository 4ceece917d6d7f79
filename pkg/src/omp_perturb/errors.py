"""Exception hierarchy shared by every module of the package."""


class OmpPerturbError(ValueError):
    """Base class for all domain errors raised by omp_perturb."""


class DimensionMismatch(OmpPerturbError):
    pass


class RankDeficient(OmpPerturbError):
    pass


class NotSymmetric(OmpPerturbError):
    pass


class BadK(OmpPerturbError):
    pass


class AllZero(OmpPerturbError):
    pass


class BadAlpha(OmpPerturbError):
    pass


class BadTau(OmpPerturbError):
    pass


class BadL(OmpPerturbError):
    pass


class CombinatorialLimit(OmpPerturbError):
    """Exact enumeration would visit more subsets than the configured cap."""


class ZeroDenominator(OmpPerturbError):
    pass


class EpsTooLarge(OmpPerturbError):
    pass


class DeltaTooLarge(OmpPerturbError):
    pass


class DegenerateBound(OmpPerturbError):
    pass


class NotStrongDecaying(OmpPerturbError):
    pass


class ScenarioMismatch(OmpPerturbError):
    """A checker was handed a problem outside the scenario it covers."""


class EtaTooLarge(OmpPerturbError):
    pass


class DeltaOutOfRange(OmpPerturbError):
    pass


class TooFewColumns(OmpPerturbError):
    pass


class NotNormalized(OmpPerturbError):
    pass


class PreconditionBroken(OmpPerturbError):
    pass
