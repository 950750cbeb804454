"""Validity reports shared by the Pi, S-permutation and Sudoku validators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

# Scopes a violation can name
SCOPE_CELL = "cell"
SCOPE_ROW = "row"
SCOPE_COLUMN = "column"
SCOPE_BLOCK = "block"


@dataclass(frozen=True)
class Violation:
    """A single failed constraint.

    ``index`` is 1-based: a row or column number, or a ``(row, column)``
    pair for cells and blocks.
    """

    condition: str
    scope: str
    index: int | Tuple[int, int]
    detail: str = ""

    def describe(self) -> str:
        """Return a one-line human description."""
        if isinstance(self.index, tuple):
            where = f"{self.scope} ({self.index[0]},{self.index[1]})"
        else:
            where = f"{self.scope} {self.index}"
        text = f"{self.condition}: {where}"
        if self.detail:
            text = f"{text}: {self.detail}"
        return text


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of a validator; ``ok`` exactly when there are no violations."""

    violations: Tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        """Return True if every constraint held."""
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.violations)

    def __len__(self) -> int:
        return len(self.violations)

    def by_scope(self, scope: str) -> List[Violation]:
        """Return the violations that name ``scope``."""
        return [v for v in self.violations if v.scope == scope]

    def describe(self) -> str:
        """Return all violations joined on one line."""
        if self.ok:
            return "ok"
        return "; ".join(v.describe() for v in self.violations)

    def lines(self) -> List[str]:
        """Return one line per violation, or ``["ok"]``."""
        if self.ok:
            return ["ok"]
        return [v.describe() for v in self.violations]


def duplicates_and_missing(values, expected) -> str:
    """Describe how ``values`` differs from a permutation of ``expected``."""
    seen = set()
    repeated = []
    for value in values:
        if value in seen and value not in repeated:
            repeated.append(value)
        seen.add(value)
    missing = [value for value in expected if value not in seen]
    parts = []
    if repeated:
        parts.append("repeated " + ",".join(str(v) for v in repeated))
    if missing:
        parts.append("missing " + ",".join(str(v) for v in missing))
    return "; ".join(parts)
