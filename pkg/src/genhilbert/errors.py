"""Exception types raised across the package."""

from __future__ import annotations


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class KernelOverflowError(OverflowError):
    """A log-domain value cannot be exponentiated in double precision."""

    def __init__(self, message: str, index: tuple[int, int] | None = None):
        super().__init__(message)
        self.index = index


class ConvergenceError(RuntimeError):
    """An iterative or adaptive procedure ran out of budget."""

    def __init__(self, message: str, bracket: tuple[float, float] | None = None):
        super().__init__(message)
        self.bracket = bracket


class BudgetExhaustedError(ConvergenceError):
    """A certified series could not reach its tolerance within the truncation cap."""


class MeasureParseError(ValueError):
    """Malformed measure document; ``path`` names the offending location."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class MeasureValidationError(ValueError):
    """Structurally valid measure document violating one or more invariants."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = list(violations)
