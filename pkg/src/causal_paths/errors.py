"""Exception hierarchy."""


class CausalPathError(Exception):
    """Base class for all package errors."""


class ParseError(CausalPathError, ValueError):
    """A token in a data or metadata file could not be read as a number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FormatError(ParseError):
    """A file is structurally malformed (ragged rows, wrong field count)."""


class MissingFileError(CausalPathError, FileNotFoundError):
    """A metadata entry refers to a pair with no data file."""


class DegenerateDataError(CausalPathError, ValueError):
    """Input has a constant column (zero variance) or is too short."""

    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


class ConfigurationError(CausalPathError, ValueError):
    """Invalid parameters: unknown leader, iterations < 1, thresholds out of range."""


class UndefinedMetricError(CausalPathError, ZeroDivisionError):
    """A metric's denominator is zero for the given confusion matrix."""
