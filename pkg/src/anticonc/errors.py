"""Exception types shared across the library."""


class TooLarge(Exception):
    """Enumeration dimension exceeds the configured cap."""


class CapacityExceeded(Exception):
    """Sum range exceeds the dynamic-programming table capacity."""


class BudgetExceeded(Exception):
    """Requested enumeration exceeds the operation budget."""


class BadParams(ValueError):
    """Parameters violate a structural precondition."""


class Undecidable(Exception):
    """Interval comparison reached the precision cap without separating the values.

    Signals that the rational operand is extraordinarily close to the
    expression value; the comparison is reported, never guessed.
    """


class InvariantViolated(Exception):
    """A provable invariant failed, indicating an implementation bug.

    The offending witness is attached as ``witness``.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
