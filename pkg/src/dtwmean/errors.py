class DtwMeanError(Exception):
    """Base class for errors raised by dtwmean."""


class GuardError(DtwMeanError):
    """An instance exceeds a configured size limit and was refused."""


class DataError(DtwMeanError, ValueError):
    """Malformed input data (parse failures, ragged rows, non-finite values)."""
