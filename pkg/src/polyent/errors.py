"""Exception hierarchy shared by the exact pipeline and the CLI."""


class PolyentError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PolyentError, ValueError):
    """An argument lies outside the domain of the operation."""


class BudgetExceeded(PolyentError):
    """A configured work cap (pieces, iterations, search depth) was hit."""


class NotType1(PolyentError):
    """The map has a periodic point that is not fixed."""


class NotMonotone(PolyentError):
    """A monotone map was required."""


class InternalInvariantViolation(PolyentError, AssertionError):
    """A mathematical invariant failed; this signals a bug, not bad input."""


class EmptyChain(PolyentError, ValueError):
    pass


class NoSimpleCycleFound(PolyentError):
    pass


class PreimageSelectionFailure(InternalInvariantViolation):
    pass


class InsufficientData(PolyentError, ValueError):
    pass


class PrefixTooShort(InsufficientData):
    pass


class MapFormatError(PolyentError, ValueError):
    """A map or certificate file could not be parsed."""
