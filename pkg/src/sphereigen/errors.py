"""Exception types shared across the library."""


class SphereigenError(Exception):
    """Base class for all library errors."""


class ParameterOutOfRange(SphereigenError):
    pass


class OutOfDomain(SphereigenError):
    pass


class ValueOutOfRange(SphereigenError):
    pass


class DegeneratePsi(SphereigenError):
    pass


class StencilUnavailable(SphereigenError):
    pass


class DegenerateGradient(SphereigenError):
    pass


class NoZeroBeforePole(SphereigenError):
    pass


class EigenNotConverged(SphereigenError):
    pass


class DegenerateNearTwo(SphereigenError):
    """Two discrete eigenvalues cluster around the shift; reported, not resolved."""


class NormalizationMissing(SphereigenError):
    pass


class EmptyLevel(SphereigenError):
    pass


class DegenerateLevel(SphereigenError):
    pass


class CriticalLevelSkipped(SphereigenError):
    pass


class TopCurveNotFound(SphereigenError):
    pass


class NoBoundaryContact(SphereigenError):
    pass


class DegenerateTriangle(SphereigenError):
    pass


class OpenCurve(SphereigenError):
    pass


class UnknownSuite(SphereigenError):
    pass
