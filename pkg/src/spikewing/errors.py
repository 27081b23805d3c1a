"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with inputs that break its preconditions."""


class EmissionError(ValueError):
    """A network cannot be exported (non-finite parameters, bad manifest)."""


class TrainingDiverged(RuntimeError):
    """Loss became non-finite; carries the last finite-loss parameters."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good
