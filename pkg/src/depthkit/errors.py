"""Exception types raised across depthkit."""


class DepthkitError(Exception):
    """Base class for all library errors."""


class DataError(DepthkitError, ValueError):
    """Malformed or invalid input data.

    ``row`` and ``column`` are 1-based positions in the source file when the
    error comes from parsing, otherwise None.
    """

    def __init__(self, message, row=None, column=None, path=None):
        self.row = row
        self.column = column
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class SingularScatterError(DepthkitError, ValueError):
    """A scatter matrix is not numerically positive definite."""


class LocalizationError(DepthkitError, ValueError):
    """A localized neighbourhood keeps too few sample points."""


class UnsupportedMethodError(DepthkitError, ValueError):
    """A (notion, method) combination that the library does not provide."""
