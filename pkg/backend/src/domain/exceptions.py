"""Domain errors raised by the assimilation engine."""

from __future__ import annotations


class DabError(Exception):
    """Base error for every failure the engine reports to callers."""


class DimensionError(DabError):
    """Raised when an array shape or length does not match the grid."""


class DegenerateStatisticsError(DabError):
    """Raised when a statistic is undefined, e.g. a zero standard deviation."""


class MissingStatsError(DabError):
    """Raised when normalization statistics lack a variable of the state."""


class UnsupportedLeadError(DabError):
    """Raised when a model is invoked with a lead it does not support."""

    def __init__(self, lead: int, supported: tuple[int, ...]) -> None:
        super().__init__(
            f"Unsupported lead {lead} h. Supported leads: {list(supported)}"
        )
        self.lead = lead
        self.supported = supported


class DecompositionError(DabError):
    """Raised when a target lead cannot be composed from supported leads."""


class ObservationConfigError(DabError):
    """Raised when a grid slot has no observation error and is not marked absent."""


class WindowError(DabError):
    """Raised when observations fall outside an assimilation window."""


class EnsembleSizeError(DabError):
    """Raised when an ensemble has fewer than two members."""


class NumericalError(DabError):
    """Raised when a linear system cannot be solved reliably."""

    def __init__(self, message: str, *, condition: float | None = None) -> None:
        super().__init__(message)
        self.condition = condition


class AlignmentError(DabError):
    """Raised when candidate and truth fields do not share grid and times."""


class UndefinedMetricError(DabError):
    """Raised when a score is undefined, e.g. ACC with zero anomaly variance."""


class CycleInitializationError(DabError):
    """Raised when no analysis can anchor a background forecast."""


class FormatError(DabError):
    """Raised when an on-disk container is malformed."""

    def __init__(
        self,
        message: str,
        *,
        expected: int | None = None,
        actual: int | None = None,
    ) -> None:
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class MissingArtifactError(DabError):
    """Raised when a pipeline step needs an artifact an earlier step produces."""

    def __init__(self, message: str, *, path: str) -> None:
        super().__init__(f"{message}: {path}")
        self.path = path
