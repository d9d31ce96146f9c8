class DomainError(ValueError):
    """Parameters outside the mathematical domain of an operation."""


class ZeroStateError(DomainError):
    """An operation produced (or was handed) the zero vector."""


class ConvergenceError(RuntimeError):
    """A numerical routine failed to reach its requested tolerance."""
