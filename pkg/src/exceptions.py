class SteklovWarpError(Exception):
    """
    Base class for every error raised by the package
    """


class DomainError(SteklovWarpError, ValueError):
    """
    Argument outside the domain of an operation
    """


class HypothesisViolationError(DomainError):
    """
    Parameters violate a hypothesis of the warped construction
    (for instance epsilon >= collar_length / 6, or delta <= k / n)
    """


class CompletenessError(SteklovWarpError):
    """
    A truncated eigenvalue stream cannot certify that nothing below a bound
    was omitted
    """


class ResolutionError(SteklovWarpError):
    def __init__(self, message: str, interval=None):
        super().__init__(message)
        self.interval = interval


class NumericError(SteklovWarpError, ArithmeticError):
    def __init__(self, message: str, residual: float = None):
        super().__init__(message)
        self.residual = residual


class UnsupportedModeError(SteklovWarpError):
    """
    Operation not defined for the requested metric mode
    """


class ConfigError(SteklovWarpError):
    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field_path = field_path


class VerificationFailure(SteklovWarpError):
    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report
