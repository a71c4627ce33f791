"""Exception hierarchy shared by the library and the CLI.

Exit-code mapping used by the CLI: usage/config problems exit 2, data
problems exit 3, numeric failures exit 4.
"""


class SlidekitError(Exception):
    exit_code = 1


class UsageError(SlidekitError):
    """Bad argument, malformed config, or out-of-range parameter."""

    exit_code = 2


class DataError(SlidekitError):
    """Problems with dataset contents or files."""

    exit_code = 3


class DimensionError(DataError):
    """Mismatched image/vector shapes between operands."""


class EmptyDatasetError(DataError):
    pass


class InsufficientDataError(DataError):
    """Not enough samples for the requested operation (e.g. k-NN, k folds)."""


class DegenerateDataError(DataError):
    """Input that makes the problem ill-posed (e.g. single-class SVM fit)."""


class NumericError(SlidekitError):
    """Numerical failure: non-finite values or non-convergence."""

    exit_code = 4
