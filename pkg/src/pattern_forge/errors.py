"""Exception hierarchy shared by the library and the CLI."""


class PatternForgeError(Exception):
    """Base class for every error raised by pattern_forge."""


class InvalidPermutation(PatternForgeError, ValueError):
    """Text or entries do not describe a permutation (or word)."""


class DomainError(PatternForgeError, ValueError):
    """An argument lies outside the domain of a function."""


class Avoider(DomainError):
    """The permutation has no 321 occurrence."""


class NotAType(DomainError):
    """The permutation cannot be a type: it avoids 321 or is not saturated."""


class NotInImage(DomainError):
    """The (left, right, type) triple is not produced by the injection."""


class RangeError(DomainError):
    """More coefficients were requested than are available."""


class InsufficientData(DomainError):
    """Too few nonzero coefficients to build a growth table."""


class LimitExceeded(PatternForgeError):
    """An exhaustive enumeration was requested above the configured limit."""
