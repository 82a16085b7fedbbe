"""Exception hierarchy shared by every subsystem."""


class ContactLiftError(Exception):
    """Base class for all library errors."""


class DomainError(ContactLiftError):
    """Evaluation hit a pole, a branch point, or left the declared domain."""

    def __init__(self, message, node=None, point=None):
        super().__init__(message)
        self.node = node
        self.point = point


class DimensionMismatch(ContactLiftError):
    pass


class ArityMismatch(ContactLiftError):
    pass


class UnsupportedDomain(ContactLiftError):
    pass


class DegenerateInput(ContactLiftError):
    pass


class QuadratureNotConverged(ContactLiftError):
    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class NotClosed(ContactLiftError):
    def __init__(self, message, max_residual=None):
        super().__init__(message)
        self.max_residual = max_residual


class SingularSystem(ContactLiftError):
    pass


class PotentialMismatch(ContactLiftError):
    def __init__(self, message, max_residual=None):
        super().__init__(message)
        self.max_residual = max_residual


class TwistNotClosed(ContactLiftError):
    def __init__(self, message, max_residual=None):
        super().__init__(message)
        self.max_residual = max_residual


class NotAPotential(ContactLiftError):
    def __init__(self, message, max_residual=None):
        super().__init__(message)
        self.max_residual = max_residual


class NotScaleSymplectic(ContactLiftError):
    def __init__(self, message, max_residual=None):
        super().__init__(message)
        self.max_residual = max_residual


class BaseMismatch(ContactLiftError):
    pass


class ImageEscapesDomain(ContactLiftError):
    pass


class DegeneratePullback(ContactLiftError):
    def __init__(self, message, min_top=None):
        super().__init__(message)
        self.min_top = min_top


class NotInContactHyperplane(ContactLiftError):
    pass


class DegenerateDirection(ContactLiftError):
    pass


class TangencyViolation(ContactLiftError):
    def __init__(self, message, max_residual=None, location=None):
        super().__init__(message)
        self.max_residual = max_residual
        self.location = location


class ParamOutOfRange(ContactLiftError):
    pass


class IntermediatePointEscapes(ContactLiftError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ParseError(ContactLiftError):
    def __init__(self, message, line=None, column=None, token=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.token = token


class UnknownName(ContactLiftError):
    pass


class ConfigurationError(ContactLiftError):
    """A scenario is structurally invalid; no checks were run."""
