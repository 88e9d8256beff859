"""Exception hierarchy shared across the toolkit.

The CLI maps these onto exit codes: DataError -> 2, ServiceError -> 3.
"""


class DataError(ValueError):
    """Invalid input data or violated operation precondition."""


class ServiceError(RuntimeError):
    """Failure while talking to an external aligner/embedding service."""
