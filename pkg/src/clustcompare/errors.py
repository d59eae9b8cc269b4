"""Exception hierarchy shared by every module."""


class ClusteringError(ValueError):
    """Base class for all errors raised by this package."""


class InvalidInputError(ClusteringError):
    """Malformed labels, subsets, features or files."""


class DimensionError(ClusteringError):
    """Two inputs disagree on the number of points."""


class UndefinedMeasureError(ClusteringError):
    """The measure has no value on this input (e.g. Rand index with n = 1)."""


class PreconditionError(ClusteringError):
    """A documented precondition of a measure does not hold."""


class UnsupportedDecompositionError(ClusteringError):
    """The measure has no component-based decomposition."""


class EnumerationLimitError(ClusteringError):
    """Exhaustive enumeration requested above the configured cap."""
