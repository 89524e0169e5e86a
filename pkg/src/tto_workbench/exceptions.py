class WorkbenchError(Exception):
    """Base class for errors raised by the workbench."""


class InvalidInput(WorkbenchError, ValueError):
    """An argument violates a documented precondition."""


class NumericalFailure(WorkbenchError, ArithmeticError):
    """A computation finished but its result failed a residual check."""
