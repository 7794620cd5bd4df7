"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class DiscoError(Exception):
    """Base class for every error raised by disco_index."""

    exit_code: int = 1


class InputError(DiscoError, ValueError):
    """Malformed input data: non-finite values, ragged CSV, size mismatch."""

    exit_code = 2


class DataNotFoundError(InputError, FileNotFoundError):
    """A data or label file does not exist."""

    exit_code = 2


class LabelError(InputError):
    """Labels that do not fit the points they describe."""

    exit_code = 3


class ParameterError(DiscoError, ValueError):
    """A parameter outside its documented bounds."""

    exit_code = 4


class ContractError(DiscoError, RuntimeError):
    """An operation called outside its precondition."""


class UndefinedCorrelationError(DiscoError, ValueError):
    """Correlation requested on a series with zero variance."""
