"""Exception types shared by every module."""


class AtomSpecError(Exception):
    """Base class for errors raised by this package."""


class InvalidInput(AtomSpecError, ValueError):
    """Malformed or inconsistent input data."""


class CycleError(InvalidInput):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__("cover relation has a cycle: " + " -> ".join(self.cycle))


class BudgetError(AtomSpecError):
    """The materialization window is too small for an exact answer.

    ``required`` is the smallest budget that would make the request exact.
    """

    def __init__(self, required, message=None):
        self.required = required
        super().__init__(message or f"budget too small; need N >= {required}")
