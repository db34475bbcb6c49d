"""Exception hierarchy shared by every ndepth module."""

from __future__ import annotations


class NdepthError(Exception):
    """Base class for all errors raised by this package."""


class UsageError(NdepthError, ValueError):
    """Bad arguments: arity mismatch, weights out of range, malformed masks."""


class StructuralError(NdepthError, ValueError):
    """A list of intervals that is not a valid partition of the nonzero masks."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ResourceLimitError(NdepthError):
    """A search or enumeration would exceed its configured budget."""


class SearchLimitExceeded(ResourceLimitError):
    """The solver visited more nodes than its node limit allowed."""

    def __init__(self, message: str, nodes: int, threshold: int | None = None):
        super().__init__(message)
        self.nodes = nodes
        self.threshold = threshold


class NoClosedForm(NdepthError):
    """No closed-form ndepth is known for this arity (k > 5)."""


class CertificateParseError(NdepthError, ValueError):
    """A certificate document could not be parsed."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.field = field
        self.line = line
