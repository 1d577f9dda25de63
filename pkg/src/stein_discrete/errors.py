"""Exception taxonomy shared across the package."""


class SteinDiscreteError(Exception):
    """Base class for all package errors."""


class DomainError(SteinDiscreteError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InvalidModelError(SteinDiscreteError, ValueError):
    """Model parameters violate the family's constraints."""


class UsageError(SteinDiscreteError, ValueError):
    """Caller misuse: empty samples, malformed inputs, invalid pairings."""


class ConfigError(UsageError):
    """Malformed experiment configuration file."""


class NumericalError(SteinDiscreteError, RuntimeError):
    """A numerical procedure failed (non-convergent sum, singular system)."""


class SumNotConverged(NumericalError):
    """A tail-truncated summation did not meet its tolerance within budget."""


class InvalidStartError(UsageError):
    """Optimizer started from a point with a non-finite objective."""
