class InvariantViolation(AssertionError):
    """Two independent computations that must agree did not.

    This signals a bug in the package, never bad input.
    """


class GuardExceeded(ValueError):
    """An exhaustive enumeration would exceed its hard size cap."""
