"""Exception hierarchy shared by all modules."""


class SemiodmError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SemiodmError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OrderOutOfRange(DomainError):
    """Bessel order beyond the supported range."""


class DimensionMismatch(SemiodmError, ValueError):
    pass


class ForbiddenRegion(DomainError):
    """The point is at a turning point or in the classically forbidden zone."""


class DegenerateSeparation(DomainError):
    """A non-symmetric kernel was asked for r == r'; use the diagonal entry point."""


class NonpositiveSeparation(DomainError):
    pass


class QuadratureNotConverged(SemiodmError, RuntimeError):
    pass


class ContourNotConverged(SemiodmError, RuntimeError):
    pass


class ModelUnsupported(SemiodmError, ValueError):
    pass
