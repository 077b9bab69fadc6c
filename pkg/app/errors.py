"""Exceptions raised by the homology localization solvers and their front ends.
"""


class HomologyError(ValueError):
    """Base class for every error raised by this package.
    """


class InvalidComplexError(HomologyError):
    """The simplicial complex is not face-closed, has a bad weight, or a simplex is unknown.
    """


class DimensionMismatchError(HomologyError):
    """Two chains (or a chain and an operation) disagree on the dimension.
    """


class NotACycleError(HomologyError):
    """A chain that must be a cycle has a non-empty boundary.
    """


class InvalidDecompositionError(HomologyError):
    """A tree decomposition failed validation.

    Attributes:
        violations (list): Human readable violation messages.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class InfeasibleError(HomologyError):
    """The root table lacks the (empty, empty) entry."""


class OracleCapExceeded(HomologyError):
    """Brute force was asked to enumerate more (d+1)-simplices than allowed.
    """


class ResourceLimitExceeded(HomologyError):
    """A solve ran out of time or table entries.

    Attributes:
        status (str): Either ``"timeout"`` or ``"memory_cap"``.
    """

    def __init__(self, status, message):
        super().__init__(message)
        self.status = status


class InvalidFileError(HomologyError):
    """An input file could not be parsed or did not match its schema.
    """


class VerificationError(HomologyError):
    """A witness check failed.

    Attributes:
        check (str): Name of the failed check, e.g. ``"not a cycle"``.
    """

    def __init__(self, check, message=None):
        super().__init__(message or check)
        self.check = check


class InvalidParameterError(HomologyError):
    """A generator or command received parameters outside their domain.
    """
