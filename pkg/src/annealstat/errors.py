"""Exception taxonomy shared across the package.

The CLI maps these onto its exit codes: parse errors exit 2, embedding
failures exit 3, capacity limits exit 4, anything else exit 1.
"""


class AnnealstatError(Exception):
    """Base class for package-specific failures."""


class QuboParseError(AnnealstatError):
    """Malformed problem file; carries the 1-based offending line number."""

    def __init__(self, message: str, line_number: int):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


class CapacityError(AnnealstatError):
    """Problem too large for the requested backend."""


class EmbeddingError(AnnealstatError):
    """No valid minor embedding found within the search budget."""


class ExpansionPointError(AnnealstatError):
    """Log-likelihood or a derivative was non-finite at an expansion point.

    ``trace`` holds the iterations completed before the failure.
    """

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
