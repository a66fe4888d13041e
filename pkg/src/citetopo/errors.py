"""Exception hierarchy shared by all modules."""


class CitetopoError(Exception):
    """Base class for errors raised by citetopo."""


class ParseError(CitetopoError):
    """Malformed edge-list input.

    ``lineno`` is 1-based, ``None`` when the stream itself is unreadable.
    """

    def __init__(self, message, lineno=None, source=None):
        self.lineno = lineno
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}"
        if lineno is not None:
            where += f":{lineno}" if where else f"line {lineno}"
        super().__init__(f"{where}: {message}" if where else message)


class EmptyGraphError(CitetopoError):
    """Raised when no usable edges remain after preprocessing."""


class ManifestError(CitetopoError):
    """Dataset manifest problems, including n/m mismatches."""


class ResourceError(CitetopoError):
    """A computation would exceed a configured resource bound."""

    def __init__(self, message, required_bytes=None):
        self.required_bytes = required_bytes
        super().__init__(message)


class StatisticsError(CitetopoError):
    """Invalid input to the comparison pipeline."""
