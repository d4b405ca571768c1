"""Exception types raised by the figure pipeline."""


class PlotkitError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(PlotkitError):
    """An input file does not match the expected column layout."""


class EmptyDataError(PlotkitError):
    """An input file has a valid header but no data rows."""
