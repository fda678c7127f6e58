"""Exception types raised across the package."""


class TrustAllocError(Exception):
    """Base class for domain errors."""


class DimensionMismatch(TrustAllocError, ValueError):
    pass


class OutOfRange(TrustAllocError, ValueError):
    pass


class ImpossibleObservation(TrustAllocError):
    """The observation has (numerically) zero probability under the current belief."""


class BadQuantiles(TrustAllocError, ValueError):
    pass


class MissingAgent(TrustAllocError, KeyError):
    pass


class EmptyFixedList(TrustAllocError, ValueError):
    pass


class ParseError(TrustAllocError):
    """Malformed input document. ``line`` is 1-based when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        loc = ""
        if path is not None:
            loc = f"{path}"
            if line is not None:
                loc += f":{line}"
            loc += ": "
        super().__init__(loc + message)


class ValidationError(TrustAllocError, ValueError):
    """Well-formed document whose content violates a model invariant."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        prefix = ""
        if field:
            prefix = f"{field}"
            if line is not None:
                prefix += f" (line {line})"
            prefix += ": "
        super().__init__(prefix + message)
