"""Exception hierarchy shared by every bifuzzy module."""


class BifuzzyError(Exception):
    """Base class for all library errors."""


class ValidationError(BifuzzyError, ValueError):
    """A value violates a structural invariant.

    ``invariant`` names the violated rule so callers (and the CLI) can report it.
    """

    invariant = "Invalid"

    def __init__(self, message: str, invariant: str | None = None):
        super().__init__(message)
        if invariant is not None:
            self.invariant = invariant


class EmptySupport(ValidationError):
    invariant = "EmptySupport"


class OutOfRange(ValidationError):
    invariant = "OutOfRange"


class NotNormal(ValidationError):
    invariant = "NotNormal"


class NotConvex(ValidationError):
    invariant = "NotConvex"


class InvalidInterval(ValidationError):
    invariant = "InvalidInterval"


class DimensionMismatch(ValidationError):
    invariant = "DimensionMismatch"


class UnknownEvent(BifuzzyError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class AlphabetMismatch(ValidationError):
    invariant = "AlphabetMismatch"


class StateBudgetExceeded(BifuzzyError):
    """The reachable state-pair set outgrew the node budget."""


class PremiseViolated(ValidationError):
    invariant = "PremiseViolated"


class LatticeNotClosed(ValidationError):
    invariant = "LatticeNotClosed"


class SearchSpaceTooLarge(BifuzzyError):
    pass


class ConfigInvalid(ValidationError):
    invariant = "ConfigInvalid"


class ParseError(BifuzzyError, ValueError):
    """Malformed input text; ``location`` pinpoints the offending spot."""

    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
