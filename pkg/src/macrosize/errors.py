"""Exception types shared across the package."""


class MacrosizeError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MacrosizeError):
    """A physical precondition is violated (bad dimension, negative mass, ...)."""


class TruncationError(DomainError):
    """A truncated Fock representation leaves too much weight outside the basis."""

    def __init__(self, message: str, tail_weight: float, suggested_dim: int):
        super().__init__(message)
        self.tail_weight = tail_weight
        self.suggested_dim = suggested_dim


class ConfigError(MacrosizeError):
    """A run configuration cannot be parsed (unknown key, bad unit, ...)."""
