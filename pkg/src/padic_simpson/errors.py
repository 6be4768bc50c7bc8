"""Exception hierarchy shared by every module of the engine."""


class PadicError(Exception):
    """Base class for all engine errors."""


class DomainError(PadicError):
    """Input lies outside the mathematical domain of an operation."""


class PrecisionError(PadicError):
    """The working precision is insufficient to decide a question."""


class DivisionBelowPrecision(PrecisionError, ZeroDivisionError):
    pass


class PrecisionExhausted(PrecisionError):
    pass


class LogDomainError(DomainError):
    pass


class ExpDomainError(DomainError):
    pass


class CharacterAdmissibilityError(DomainError):
    pass


class RootsNotInField(DomainError):
    pass


class NotUnipotentError(DomainError):
    pass


class NotNilpotentError(DomainError):
    pass


class CommutationViolation(DomainError):
    pass


class InvalidFieldConfig(DomainError, ValueError):
    pass
