"""Exception types shared by every module.

All domain failures derive from DomainError so the command line can turn
them into exit code 2 with a small JSON payload.
"""


class DomainError(Exception):
    """Base class for errors that describe a mathematical or config problem."""

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


class ConfigError(DomainError):
    pass


class CyclicSubstitution(ConfigError):
    pass


class HorizonExceeded(DomainError):
    pass


class ConfigMismatch(DomainError):
    pass


class SubstitutedGenerator(DomainError):
    pass


class UnknownMachine(DomainError):
    pass


class CapExceeded(DomainError):
    pass


class StateCapExceeded(CapExceeded):
    pass


class IdentityInput(DomainError):
    pass


class SearchExhausted(DomainError):
    pass


class RangeExceeded(DomainError):
    pass


class EnumeratorBudget(DomainError):
    pass


class ConfigTooShort(DomainError):
    pass


class OutOfFamily(DomainError):
    pass


class IdentityAssertFailed(DomainError):
    pass


class WordSyntaxError(DomainError, SyntaxError):
    """Raised by the word parser; ``position`` is the 0-based offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position

    def to_json(self):
        d = super().to_json()
        d["position"] = self.position
        return d


class ZeroExponentWarning(UserWarning):
    pass
