"""Named error types shared across the package."""


class BobylevError(Exception):
    """Base class for package errors."""


class DomainError(BobylevError, ValueError):
    """Argument outside its mathematical domain (e.g. theta not in [0, pi/2])."""


class IntegrabilityError(BobylevError, ValueError):
    """Weight does not vanish fast enough against a grazing singularity."""


class GridError(BobylevError, ValueError):
    """Incompatible or malformed evaluation grids."""


class RangeError(BobylevError, ValueError):
    """Evaluation beyond the gridded range (extrapolation is forbidden)."""


class TruncationError(BobylevError, ValueError):
    """Tail beyond r_max contributes more than the allowed tolerance."""

    def __init__(self, message, tail_estimate=None):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class BoundViolation(BobylevError, ValueError):
    """|phi| exceeds the characteristic-function bound beyond tolerance."""


class StiffnessError(BobylevError, RuntimeError):
    """Time step underflow after repeated step rejections."""


class RelaxationError(BobylevError, RuntimeError):
    """Fixed-point relaxation did not converge within its budget."""

    def __init__(self, message, residual_history=None):
        super().__init__(message)
        self.residual_history = residual_history or []


class MomentDivergenceError(BobylevError, ValueError):
    """Requested moment diverges (non-cancelling infinite-energy tails)."""


class RTooSmallError(BobylevError, ValueError):
    """Cutoff radius leaves less than half the mass."""


class HypothesisError(BobylevError, ValueError):
    """A scenario violates a theorem hypothesis; carries the condition name."""

    def __init__(self, condition, message):
        super().__init__(f"{condition}: {message}")
        self.condition = condition


class NormalizationError(BobylevError, ValueError):
    """Initial data violates a required normalization (mass, energy)."""
