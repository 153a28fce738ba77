"""Custom exception hierarchy for the toolkit."""


class AppError(Exception):
    """Base application error."""


class InvalidHypergraphError(AppError):
    """Raised when a hypergraph value violates its invariants."""


class HypergraphFormatError(InvalidHypergraphError):
    """Raised when hypergraph text cannot be parsed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class SearchBoundExceededError(AppError):
    """Raised when an exhaustive search is asked to run beyond its bound."""

    def __init__(self, what: str, limit: int, actual: int) -> None:
        self.what = what
        self.limit = limit
        self.actual = actual
        super().__init__(f"{what}: {actual} exceeds the configured bound {limit}")


class PaletteError(AppError):
    """Raised for malformed palettes or mismatched color distributions."""


class PartitionedHypergraphError(AppError):
    """Raised for invalid partitioned hypergraphs or degree queries."""


class CertificateFormatError(AppError):
    """Raised when a certificate file cannot be decoded."""


class CheckpointMismatchError(AppError):
    """Raised when a census checkpoint does not match the requested run."""


class InvalidOrderingError(AppError):
    """Raised when a vertex ordering is not a permutation of the vertex set."""


class MeasurementError(AppError):
    """Raised for invalid density-measurement parameters."""
