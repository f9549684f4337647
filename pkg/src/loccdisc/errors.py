"""Exception types raised across the package."""


class LoccError(Exception):
    """Base class for every error raised by loccdisc."""


class ShapeError(LoccError, ValueError):
    pass


class SizeLimitError(LoccError, ValueError):
    pass


class DomainError(LoccError, ValueError):
    """An operation's precondition on its input does not hold."""


class ValidationError(LoccError, ValueError):
    def __init__(self, message, fields=()):
        super().__init__(message)
        self.fields = list(fields)


class ConvergenceError(LoccError, RuntimeError):
    """A numerical search ended without meeting its residual contract."""

    def __init__(self, message, best_residual=float("nan"), details=None):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual
        self.details = details or {}


class SearchFailure(LoccError, RuntimeError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PlannerFailure(LoccError, RuntimeError):
    """A planner stage failed; ``stage`` names it and ``diagnostics`` carries context."""

    def __init__(self, stage, message, diagnostics=None):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.diagnostics = diagnostics or {}


class InternalContradiction(LoccError, AssertionError):
    """Raised where the math says a branch is unreachable. Seeing it means a bug."""
