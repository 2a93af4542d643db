"""Exception hierarchy shared by all modules.

The CLI maps :class:`ContractError` (and subclasses) to exit status 1 and
:class:`InputError` to exit status 2.
"""


class GPSError(Exception):
    pass


class ContractError(GPSError):
    """A precondition or postcondition of an operation was violated."""


class CapacityError(ContractError):
    """An instance is larger than a configured cap or platform limit."""


class StatisticalFailure(ContractError):
    """A randomized routine exhausted its resampling budget."""


class InputError(GPSError):
    """Malformed or unreadable input data."""
