"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when inputs violate a documented precondition."""


class NumericalFailureError(RuntimeError):
    """Raised when an optimization run produces non-finite values.

    Carries the iteration index at which the failure was detected.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration
