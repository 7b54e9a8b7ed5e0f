"""Exception types shared across the package.

The CLI maps these onto exit codes: usage problems exit 1, resource
limits exit 2, internal invariant violations exit 3.
"""


class QuiverHallError(Exception):
    """Base class for every error raised by quiverhall."""


class BudgetExceeded(QuiverHallError):
    """An exhaustive scan would exceed its configured budget."""

    def __init__(self, what: str, needed: int, budget: int):
        self.what = what
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: needs {needed} but budget is {budget}")


class InvariantViolation(QuiverHallError):
    """An internal self-check failed (a bug trap, never expected)."""


class ClassifierDisagreement(InvariantViolation):
    """Definiteness and shape recognition classified a graph differently."""


class InterpolationUnstable(InvariantViolation):
    """Surplus samples disagree with the interpolating polynomial."""

    def __init__(self, witness: int, message: str = ""):
        self.witness = witness
        super().__init__(message or f"interpolation unstable at q={witness}")


class AmbiguousKey(InvariantViolation):
    """Two isomorphism classes share an invariant fingerprint."""


class Undecided(QuiverHallError):
    """A randomized search hit its trial cap without an answer."""


class FieldNotSplitting(QuiverHallError):
    """A characteristic polynomial does not split over the base field."""
