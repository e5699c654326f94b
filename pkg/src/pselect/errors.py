"""Exception types shared across the package."""


class SelectorError(Exception):
    """Base class for all errors raised by pselect."""


class RangeError(SelectorError, ValueError):
    """A word or length lies outside the configured universe or a guard."""


class FormatError(SelectorError, ValueError):
    """Malformed encoded word, file line or spec string."""


class PreconditionError(SelectorError, ValueError):
    """An operation was called on an input violating its stated precondition.

    ``witness`` carries the offending pair/triple when there is one.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InvariantError(SelectorError, RuntimeError):
    """Something the theory guarantees did not happen; indicates a bug."""


class ConfigError(FormatError):
    """A selector spec or command-line configuration cannot be resolved."""
