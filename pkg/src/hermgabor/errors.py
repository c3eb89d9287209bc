"""Exception hierarchy shared by all modules.

PreconditionError (and subclasses) map to CLI exit code 2,
BudgetError / ConvergenceError map to exit code 3.
"""


class GaborError(Exception):
    """Base class for all package errors."""


class PreconditionError(GaborError):
    """An operation was called outside its contract."""


class CapacityError(PreconditionError):
    """Grid cannot carry the requested Hermite index / modulation / shift."""


class ResolutionError(PreconditionError):
    """Requested scale is below the grid resolution."""


class BudgetError(GaborError):
    """Lattice enumeration exceeded the configured point budget."""


class ConvergenceError(GaborError):
    """An iterative solver failed to converge."""
