"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: usage errors exit 1, data and
format errors exit 2, numerical failures exit 3.
"""


class KgTyperError(Exception):
    """Base class for all errors raised by this package."""


class DataError(KgTyperError):
    """Malformed or inconsistent input data (files, graphs, datasets)."""


class NumericalError(KgTyperError):
    """Non-finite values or divergence during numerical work."""


class StageError(KgTyperError):
    """A pipeline stage failed; wraps the underlying cause."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
