class SDSError(Exception):
    """Base class for all sdslab errors."""


class SizeError(SDSError, ValueError):
    """A generator parameter is below its minimum."""


class ParseError(SDSError, ValueError):
    """Malformed edge-list, weights file or rule string."""


class CapacityError(SDSError):
    """A computation would exceed a configured capacity limit.

    ``parameter`` names the limit that was hit so callers (and the CLI)
    can tell the user which flag to raise.
    """

    def __init__(self, message, parameter=None):
        super().__init__(message)
        self.parameter = parameter


class ContractError(SDSError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(SDSError, ValueError):
    """The requested object does not exist for this input."""
