"""Exception types shared across the toolkit.

All validation failures raise one of these, so callers (and the CLI) can
distinguish data problems from plain I/O errors.
"""


class ChemalignError(Exception):
    """Base class for all toolkit errors."""


class ShardFormatError(ChemalignError):
    """Malformed or corrupt shard/summary file (bad magic, truncation, bad counts)."""


class DimensionMismatchError(ChemalignError):
    """Operands disagree on feature dimension or row width."""


class NonFiniteDataError(ChemalignError):
    """NaN or Inf encountered where finite values are required."""


class InsufficientDataError(ChemalignError):
    """Too few rows/graphs for the requested statistic."""


class NotPositiveSemidefiniteError(ChemalignError):
    """Matrix has an eigenvalue below the negative tolerance band."""


class DegenerateSpectrumError(ChemalignError):
    """Covariance spectrum has non-positive total mass."""
