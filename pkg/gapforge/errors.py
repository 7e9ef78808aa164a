"""
GAPFORGE Errors

Exception hierarchy shared by the library and the CLI. Every error carries
the process exit code the CLI reports for it.
"""

from typing import Iterable, List, Optional


class GapforgeError(Exception):
    """Base class for all gapforge errors."""

    exit_code = 1


class ParameterError(GapforgeError):
    """One or more named parameter constraints were violated."""

    exit_code = 2

    def __init__(self, violations: Iterable[str]):
        self.violations: List[str] = list(violations)
        super().__init__("; ".join(self.violations))


class DomainError(GapforgeError, ArithmeticError):
    """Operation undefined for its operand (e.g. inverse of zero)."""


class ContextError(GapforgeError):
    """Operands belong to different prime fields."""


class DegreeError(GapforgeError):
    """Polynomial degree too large for the evaluation domain; reduce first."""


class BudgetError(GapforgeError):
    """A configured work budget would be exceeded."""


class SearchFailure(GapforgeError):
    """The prime search ran out of candidates."""

    exit_code = 3

    def __init__(self, message: str, candidates_tried: int = 0, seed: Optional[int] = None):
        self.candidates_tried = candidates_tried
        self.seed = seed
        super().__init__(message)


class InsufficientSumsError(SearchFailure):
    """Subset enumeration ended before enough distinct sums were collected."""

    def __init__(self, found: int, target: int):
        self.found = found
        self.target = target
        super().__init__(f"insufficient distinct sums: found {found}, need {target}")


class FormatError(GapforgeError):
    """A counterexample file could not be parsed."""

    exit_code = 4


class VerificationFailure(GapforgeError):
    """A verification report contains failing checks."""

    exit_code = 5


class InvariantViolation(GapforgeError):
    """An internal invariant was checked and found false."""
