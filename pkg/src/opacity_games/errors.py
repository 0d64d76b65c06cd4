"""Exception hierarchy shared by every module of the package."""


class OpacityGameError(Exception):
    """Base class for all errors raised by this package."""


class InputError(OpacityGameError, ValueError):
    """Malformed or inconsistent user input (files, prefixes, strategies)."""


class IllegalPrefixError(InputError):
    pass


class UnreachableObservationError(InputError):
    """The pair (action, observation) cannot occur from the given information set."""

    code = "unreachable-observation"


class StrategyError(InputError):
    """A strategy is incompatible with the arena it is used on."""


class PreconditionError(OpacityGameError):
    """An operation was called outside of its documented precondition."""


class GuardExceeded(OpacityGameError):
    """A brute-force oracle refused an instance that is too large."""
