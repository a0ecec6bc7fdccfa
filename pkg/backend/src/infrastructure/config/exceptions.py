"""Run-configuration errors."""

from __future__ import annotations


class ConfigError(Exception):
    """A run configuration could not be read."""


class ConfigValidationError(ConfigError):
    """A run configuration was read but is not a valid experiment.

    Attributes:
        path: File the document came from, if any.
        location: Slash-separated key path of the offending entry, if known.
    """

    def __init__(self, message: str, *, path: str | None = None, location: str | None = None) -> None:
        super().__init__(message)
        self.path = path
        self.location = location
