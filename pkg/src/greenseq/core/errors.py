"""
Exception hierarchy.

GreenseqError and its subclasses are domain errors: bad input, a sequence that
is not what the caller claimed, a search bound that makes no sense. The CLI maps
them to exit code 1.

InvariantViolation is different. It is raised when an identity that is a
theorem (sign coherence, det C = +-1, the NZ identity, all-or-nothing region
membership) fails, which can only mean a bug. Library code never catches it.
"""


class GreenseqError(Exception):
    """Base class for recoverable domain errors."""


class InvalidQuiverError(GreenseqError):
    pass


class VertexIndexError(GreenseqError, IndexError):
    pass


class DimensionMismatchError(GreenseqError):
    pass


class ArrowNotFoundError(GreenseqError):
    pass


class NotReddeningError(GreenseqError):
    pass


class NotTameError(GreenseqError):
    pass


class PeriodNotFoundError(GreenseqError):
    pass


class NonIntegralError(GreenseqError):
    pass


class SearchConfigError(GreenseqError):
    pass


class FixtureError(GreenseqError):
    pass


class InvariantViolation(AssertionError):
    """A theorem-backed identity failed to hold."""
