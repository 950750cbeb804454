"""Sudoku matrices as ordered sums of disjoint S-permutation matrices.

A Sudoku matrix of block order n is an n^2 x n^2 matrix over [n^2] whose
rows, columns and n x n blocks are permutations of [n^2]. It equals
1*A_1 + 2*A_2 + ... + n^2*A_{n^2} for exactly one list of mutually disjoint
S-permutation matrices, where A_k marks the positions of digit k.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import (
    ArityError,
    BudgetExhausted,
    CompositionError,
    DomainError,
    ParseError,
    RangeError,
    ShapeError,
    ValidationError,
)
from .generator import ChoiceStrategy, GenerationBudget, generate_tuple
from .pi_core import PiMatrix
from .report import (
    SCOPE_BLOCK,
    SCOPE_COLUMN,
    SCOPE_ROW,
    ValidityReport,
    Violation,
    duplicates_and_missing,
)
from .sperm import SPermMatrix, theta
from .textio import expect_width, join_documents, parse_int, read_documents

_LOGGER = logging.getLogger(__name__)

CONDITION_PERMUTATION = "permutation of [n^2]"


def _as_grid(candidate, n: int) -> np.ndarray:
    """Return ``candidate`` as an n^2 x n^2 integer array with entries in [n^2]."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"block order must be a positive integer, got {n!r}")
    size = n * n
    try:
        arr = np.asarray(candidate)
    except ValueError as err:
        raise ShapeError(f"grid is ragged: {err}") from err
    if arr.shape != (size, size):
        raise ShapeError(f"expected a {size}x{size} grid, got shape {arr.shape}")
    if arr.dtype.kind not in "iu":
        raise ShapeError(f"entries must be integers, got dtype {arr.dtype}")
    bad = np.argwhere((arr < 1) | (arr > size))
    if bad.size:
        i, j = bad[0]
        raise RangeError(
            f"entry {arr[i, j]} at ({int(i) + 1},{int(j) + 1}) outside [1, {size}]"
        )
    return arr.astype(np.int64)


def _blocks(arr: np.ndarray, n: int) -> np.ndarray:
    """Return the blocks of ``arr`` as rows, block (k, l) at row k*n + l."""
    size = n * n
    return arr.reshape(n, n, n, n).transpose(0, 2, 1, 3).reshape(size, size)


def validate_sudoku(candidate, n: int) -> ValidityReport:
    """Check every row, column and block for the permutation property.

    Raises:
        ShapeError: If the grid is not n^2 x n^2 integers.
        RangeError: If an entry lies outside [n^2].
    """
    arr = _as_grid(candidate, n)
    expected = list(range(1, n * n + 1))
    target = np.arange(1, n * n + 1)
    violations: List[Violation] = []

    def check(lines: np.ndarray, scope: str, label) -> None:
        good = (np.sort(lines, axis=1) == target).all(axis=1)
        for idx in np.flatnonzero(~good):
            values = [int(v) for v in lines[idx]]
            violations.append(
                Violation(
                    CONDITION_PERMUTATION,
                    scope,
                    label(int(idx)),
                    duplicates_and_missing(values, expected),
                )
            )

    check(arr, SCOPE_ROW, lambda idx: idx + 1)
    check(arr.T, SCOPE_COLUMN, lambda idx: idx + 1)
    check(_blocks(arr, n), SCOPE_BLOCK, lambda idx: (idx // n + 1, idx % n + 1))
    return ValidityReport(tuple(violations))


@dataclass(frozen=True, eq=False)
class SudokuMatrix:
    """A validated Sudoku matrix with a read-only numpy entry array."""

    n: int
    entries: np.ndarray

    def __post_init__(self):
        report = validate_sudoku(self.entries, self.n)
        if not report.ok:
            raise ValidationError(report, "Sudoku matrix")
        arr = np.array(self.entries, dtype=np.int64)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> SudokuMatrix:
        """Build a matrix from nested rows, inferring the block order."""
        size = len(rows)
        n = isqrt(size)
        if size == 0 or n * n != size:
            raise ShapeError(f"side {size} is not the square of a block order")
        return cls(n, np.asarray(rows))

    @property
    def size(self) -> int:
        """Return the side length n^2."""
        return self.n * self.n

    def value(self, i: int, j: int) -> int:
        """Return the entry at 1-based position (i, j)."""
        return int(self.entries[i - 1, j - 1])

    def block(self, k: int, l: int) -> np.ndarray:
        """Return the 1-based block (k, l) as an n x n array."""
        n = self.n
        return self.entries[(k - 1) * n : k * n, (l - 1) * n : l * n]

    def rows(self) -> List[List[int]]:
        """Return the entries as nested Python lists."""
        return self.entries.tolist()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SudokuMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.n, self.entries.tobytes()))

    def __str__(self) -> str:
        return write_grid(self)


def compose(parts: Sequence[SPermMatrix]) -> SudokuMatrix:
    """Sum 1*A_1 + ... + n^2*A_{n^2} into a Sudoku matrix.

    Part order is significant: part k carries digit k.

    Raises:
        ArityError: If there are not exactly n^2 parts.
        ShapeError: If the parts have different orders.
        CompositionError: If two parts share a 1-position.
    """
    parts = list(parts)
    if not parts:
        raise ArityError("no parts to compose")
    n = parts[0].n
    for k, part in enumerate(parts, start=1):
        if part.n != n:
            raise ShapeError(f"part {k} has order {part.n}, expected {n}")
    if len(parts) != n * n:
        raise ArityError(f"order {n} needs {n * n} parts, got {len(parts)}")

    size = n * n
    arr = np.zeros((size, size), dtype=np.int64)
    owner: Dict[Tuple[int, int], int] = {}
    for k, part in enumerate(parts, start=1):
        for position in part.ones:
            if position in owner:
                r, c = position
                raise CompositionError(
                    f"parts {owner[position]} and {k} both have a 1 at "
                    f"({r + 1},{c + 1})",
                    parts=(owner[position], k),
                    position=(r + 1, c + 1),
                )
            owner[position] = k
            arr[position] = k
    return SudokuMatrix(n, arr)


def decompose(m: SudokuMatrix) -> List[SPermMatrix]:
    """Split a Sudoku matrix into its n^2 digit indicator matrices, in digit order."""
    if not isinstance(m, SudokuMatrix):
        m = SudokuMatrix.from_rows(m)
    return [
        SPermMatrix(
            m.n, tuple((int(r), int(c)) for r, c in np.argwhere(m.entries == k))
        )
        for k in range(1, m.size + 1)
    ]


def assemble(matrices: Sequence[PiMatrix]) -> SudokuMatrix:
    """Map every Pi_n-matrix through theta and compose the results."""
    parts = [theta(m) for m in matrices]
    _LOGGER.debug("Composing %d S-permutation matrices", len(parts))
    return compose(parts)


def generate_sudoku(
    n: int,
    strategy: Optional[ChoiceStrategy] = None,
    budget: Optional[GenerationBudget] = None,
) -> SudokuMatrix:
    """Generate a Sudoku matrix from n^2 mutually disjoint Pi_n-matrices.

    Raises:
        BudgetExhausted: If the generator gave up.
    """
    result = generate_tuple(n, strategy, budget)
    if not result.succeeded:
        raise BudgetExhausted(
            f"no Sudoku matrix of order {n} within the generation budget"
        )
    return assemble(result.matrices)


def parse_grids_raw(text: str) -> List[Tuple[int, np.ndarray]]:
    """Parse grid text into unvalidated ``(n, array)`` documents."""
    documents = []
    for doc in read_documents(text, lambda n: n * n, "Sudoku grid"):
        size = doc.n * doc.n
        arr = np.zeros((size, size), dtype=np.int64)
        for r, (line_no, tokens) in enumerate(doc.rows):
            expect_width(tokens, size, line_no)
            arr[r] = [parse_int(token, line_no) for token in tokens]
        documents.append((doc.n, arr))
    return documents


def parse_grids(text: str) -> List[SudokuMatrix]:
    """Parse and validate every grid in ``text``."""
    return [SudokuMatrix(n, arr) for n, arr in parse_grids_raw(text)]


def parse_grid(text: str) -> SudokuMatrix:
    """Parse exactly one grid.

    Raises:
        ParseError: If the text is malformed or holds more than one grid.
    """
    documents = read_documents(text, lambda n: n * n, "Sudoku grid")
    if len(documents) > 1:
        raise ParseError("expected a single grid", documents[1].line)
    return parse_grids(text)[0]


def write_grid(matrices: Union[SudokuMatrix, Sequence[SudokuMatrix]]) -> str:
    """Serialize one or more grids."""
    if isinstance(matrices, SudokuMatrix):
        matrices = [matrices]
    documents = []
    for m in matrices:
        lines = [str(m.n)]
        lines.extend(" ".join(str(int(v)) for v in row) for row in m.entries)
        documents.append("\n".join(lines) + "\n")
    return join_documents(documents)
