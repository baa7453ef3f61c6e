"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SingularCurveError(DomainError):
    """The pair (A, B) has 4A^3 + 27B^2 = 0."""


class DegenerateParameterError(DomainError):
    """A family specialization landed on a singular fibre."""


class UsageError(ValueError):
    """A caller violated a documented precondition."""


class InternalConsistencyError(RuntimeError):
    """A computed result contradicts a theorem the code relies on."""


class DataIntegrityError(RuntimeError):
    """Embedded family data failed its load-time validation."""


class ValidationFailure(RuntimeError):
    """A run produced data violating its configured bounds (CLI exit 2)."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending
