"""Exceptions raised by pisudoku."""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional, Tuple

if TYPE_CHECKING:
    from .report import ValidityReport


class PiSudokuError(Exception):
    """Base class for all pisudoku errors."""


class ShapeError(PiSudokuError, ValueError):
    """Input has the wrong shape, order or entry alphabet."""


class InputError(PiSudokuError, ValueError):
    """Input is malformed, e.g. a permutation with a repeated value."""


class DomainError(PiSudokuError, ValueError):
    """Argument lies outside the domain of the operation."""


class RangeError(PiSudokuError, ValueError):
    """Matrix entry lies outside its permitted value range."""


class ValidationError(PiSudokuError):
    """A candidate matrix failed validation.

    The full report is kept on ``report`` so callers can list every
    violation, not only the first.
    """

    def __init__(self, report: ValidityReport, what: str = "matrix"):
        """Initialize the error from a failed report."""
        self.report = report
        self.what = what
        super().__init__(f"invalid {what}: {report.describe()}")


class CompositionError(PiSudokuError):
    """S-permutation parts cannot be summed into a Sudoku matrix."""

    def __init__(
        self,
        message: str,
        parts: Optional[Tuple[int, int]] = None,
        position: Optional[Tuple[int, int]] = None,
    ):
        """Initialize with the 1-based colliding part pair and position."""
        self.parts = parts
        self.position = position
        super().__init__(message)


class ArityError(CompositionError):
    """Wrong number of parts for the order."""


class ParseError(PiSudokuError):
    """Text input does not follow the expected format."""

    def __init__(self, message: str, line: int):
        """Initialize with the 1-based line number of the failure."""
        self.line = line
        super().__init__(f"line {line}: {message}")


class ContractViolation(PiSudokuError, RuntimeError):
    """A candidate grid operation was called outside its contract."""


class BudgetExhausted(PiSudokuError):
    """Generation gave up after exhausting its backtrack and restart budget."""


class EnumerationRefused(PiSudokuError):
    """Enumeration beyond desk scale requested without opting in."""
