"""Exception types shared across the toolkit."""


class LatticeError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatchError(LatticeError):
    """Operands have incompatible dimensions."""


class RankDeficiencyError(LatticeError):
    """A matrix that must have full (column) rank does not."""


class ContainmentError(LatticeError):
    """A claimed sublattice relation fails; carries a witness row."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class ScalingError(LatticeError):
    """A dyadic rescaling would produce non-integer entries."""


class ProfileError(LatticeError):
    """An exponent profile violates the chain constraints."""

    def __init__(self, message: str, violations=None):
        super().__init__(message)
        self.violations = violations or []


class SizeGuardError(LatticeError):
    """An exhaustive construction would exceed the configured size limit."""


class BudgetExceededError(LatticeError):
    """Enumeration exceeded its node budget; carries the node count."""

    def __init__(self, message: str, nodes: int):
        super().__init__(message)
        self.nodes = nodes


class InternalCheckError(LatticeError):
    """An internal consistency check failed (indicates a bug, not bad input)."""
