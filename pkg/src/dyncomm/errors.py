"""Exceptions shared across the package."""


class DynCommError(Exception):
    """Base class for all package errors."""


class UnknownNodeError(DynCommError):
    """A node id outside the graph's node range was referenced."""


class MissingEdgeError(DynCommError):
    """An operation required an edge that is not present."""


class DuplicateEdgeError(DynCommError):
    """An edge was added that already exists."""


class UnknownClusterError(DynCommError):
    """A cluster id outside the partition's id range was referenced."""


class EmptyGraphError(DynCommError):
    """The operation needs a non-empty graph (or non-zero total weight)."""


class StreamParseError(DynCommError):
    """A stream file line could not be parsed; carries the line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class VersionMismatchError(DynCommError):
    """The stream file header declares an unsupported format version."""


class InvalidParamsError(DynCommError):
    """Generator or config parameters are out of their legal range."""


class MissingBaselineError(DynCommError):
    """A summary was requested for dynamic records without a static baseline."""
