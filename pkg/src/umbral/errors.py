"""Exception hierarchy shared by every module of the package."""


class UmbralError(Exception):
    """Base class for all errors raised by :mod:`umbral`."""


class DomainError(UmbralError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class SingularityError(DomainError):
    """A known singularity lies on an integration path or inside a Cauchy disk."""


class EmptyStripError(DomainError):
    """Two strips have an empty intersection."""


class MomentUndefined(DomainError):
    """The origin is not interior to the strip, so A^n is undefined."""


class DecomposeFirst(DomainError):
    """The operation needs a regular umbra; decompose the singular one first."""


class DivergentTail(UmbralError):
    """An integrand does not decay within the truncation window."""


class NonConvergent(UmbralError):
    """A limit (extrapolation, doubling schedule) failed to settle."""


class RouteInadmissible(UmbralError):
    """The admission checks for an evaluation route failed."""
