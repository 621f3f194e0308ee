"""Exception types shared across the package."""


class DevmineError(Exception):
    """Base class for all package errors."""


class XesParseError(DevmineError):
    """Raised on malformed XES input. Carries line/column when known."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class DegenerateLabelingError(DevmineError):
    """Raised when a labeling leaves one of the two classes empty."""


class ConfigError(DevmineError):
    """Raised on invalid pipeline/synthesis configuration."""


class ConsistencyError(DevmineError):
    """Raised when an internal contract is broken (e.g. a selected feature
    without backing data at encoding time)."""
