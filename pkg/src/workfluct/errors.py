"""Exception hierarchy.

Validation errors flag bad inputs (CLI exit code 2); numerical errors flag
quantities that cannot be evaluated for otherwise valid inputs (exit code 3).
"""


class WorkfluctError(Exception):
    """Base class for all package errors."""


class ValidationError(WorkfluctError, ValueError):
    pass


class NumericalError(WorkfluctError, ArithmeticError):
    pass


class NotHermitian(ValidationError):
    pass


class NotUnitTrace(ValidationError):
    pass


class NotPositive(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class NotProjector(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class DegenerateSpectrum(ValidationError):
    pass


class ResolutionTooCoarse(ValidationError):
    pass


class ProtocolMismatch(ValidationError):
    pass


class NotAProbability(ValidationError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class PostselectionImpossible(NumericalError):
    pass


class SingularGibbsState(NumericalError):
    pass


class BracketFailure(NumericalError):
    pass
