"""Exception types shared across the package."""


class ColdstoreError(Exception):
    """Base class for all errors raised by this package."""


class SpaceMismatchError(ColdstoreError):
    """Two states (or a state and an operator) live in incompatible spaces."""


class ZeroNormError(ColdstoreError):
    """An operation that needs a nonzero vector received the zero vector."""


class NotNormalizedError(ColdstoreError):
    """An operation that requires unit-norm input received something else."""


class CapacityError(ColdstoreError):
    """A raising operation would leave the truncated space."""


class SectorOverflowError(CapacityError):
    """Atomic excitation count would exceed the sector cap."""


class FockOverflowError(CapacityError):
    """Field occupation would exceed a Fock cap."""


class IntegrationError(ColdstoreError):
    """The fixed-step integrator detected an unreliable trajectory."""


class BudgetExceededError(ColdstoreError):
    """A requested computation would exceed the configured size budget."""


class ConfigError(ColdstoreError):
    """A scenario configuration failed validation.

    Carries the full list of violations so callers can report every problem
    at once instead of fixing them one by one.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n" + "\n".join(
            f"  - {v}" for v in self.violations))
