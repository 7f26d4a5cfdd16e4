"""Exception hierarchy.

Domain failures raise subclasses of :class:`TorelliError`.  Outcomes that are
ordinary answers rather than faults (no common line, points too far apart for
a local construction) are returned as sentinel values instead; see
``twistor.NoCommonLine`` and ``connectivity.NotNearEnough``.
"""


class TorelliError(Exception):
    """Base class for all domain errors."""


class FieldError(TorelliError):
    pass


class NotIrreducible(FieldError):
    pass


class IrreducibilityUnchecked(FieldError):
    """Polynomial is outside the range the irreducibility checker can decide."""


class BadIsolation(FieldError):
    pass


class FieldMismatch(FieldError):
    pass


class DegenerateLattice(TorelliError):
    pass


class DimensionMismatch(TorelliError):
    pass


class NotAnIsometry(TorelliError):
    pass


class NotPositive(TorelliError):
    pass


class NotPositiveDefinite(NotPositive):
    pass


class DependentSpan(TorelliError):
    pass


class NotOrthogonal(TorelliError):
    pass


class BudgetExhausted(TorelliError):
    pass


class SubdivisionBudgetExhausted(BudgetExhausted):
    pass


class StepBudgetExhausted(BudgetExhausted):
    def __init__(self, message, partial_word=None, partial_vector=None):
        super().__init__(message)
        self.partial_word = partial_word
        self.partial_vector = partial_vector


class FieldDegreeTooSmall(TorelliError):
    pass


class AlphaNotInW(TorelliError):
    pass


class AlphaNotPositive(TorelliError):
    pass


class PreconditionError(TorelliError):
    pass


class NotARoot(TorelliError):
    pass


class NotInCone(TorelliError):
    pass


class NoPositiveThreeSpace(TorelliError):
    pass


class EnumerationTooLarge(TorelliError):
    pass


class SchemaError(TorelliError):
    """Malformed or unsupported serialized document."""
