"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: DataError -> 2, NumericError -> 3.
"""


class RoughscaleError(Exception):
    """Base class for all package errors."""


class DataError(RoughscaleError):
    """Bad or insufficient input data (parse failures, empty streams, short series)."""


class NumericError(RoughscaleError):
    """A numeric procedure could not produce a result (degenerate fits, undefined F_q)."""
