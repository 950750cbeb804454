"""S-permutation matrices and the theta bijection with Pi_n-matrices.

An S-permutation matrix of block order n is an n^2 x n^2 binary matrix with
exactly one 1 in every row, every column and every n x n block. It is stored
sparsely as the positions of its n^2 ones, one per block in block row-major
order; the dense numpy form only exists at the serialization boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
import logging
from math import isqrt
from typing import List, Sequence, Tuple, Union

import numpy as np

from .exceptions import DomainError, ShapeError, ValidationError
from .pi_core import Pair, PiMatrix, count_pi
from .report import SCOPE_BLOCK, SCOPE_COLUMN, SCOPE_ROW, ValidityReport, Violation
from .textio import expect_width, join_documents, parse_int, read_documents

_LOGGER = logging.getLogger(__name__)

CONDITION_EXACTLY_ONE = "exactly one 1"

Position = Tuple[int, int]


def _count_violations(row_counts, col_counts, block_counts) -> ValidityReport:
    """Turn per-row, per-column and per-block counts of ones into a report."""
    violations: List[Violation] = []
    for i, count in enumerate(row_counts, start=1):
        if count != 1:
            violations.append(
                Violation(CONDITION_EXACTLY_ONE, SCOPE_ROW, i, f"found {count}")
            )
    for j, count in enumerate(col_counts, start=1):
        if count != 1:
            violations.append(
                Violation(CONDITION_EXACTLY_ONE, SCOPE_COLUMN, j, f"found {count}")
            )
    for (k, l), count in np.ndenumerate(np.asarray(block_counts)):
        if count != 1:
            violations.append(
                Violation(
                    CONDITION_EXACTLY_ONE, SCOPE_BLOCK, (k + 1, l + 1), f"found {count}"
                )
            )
    return ValidityReport(tuple(violations))


def _as_dense(candidate, n: int) -> np.ndarray:
    """Return ``candidate`` as an n^2 x n^2 binary array or raise ShapeError."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"block order must be a positive integer, got {n!r}")
    size = n * n
    try:
        arr = np.asarray(candidate)
    except ValueError as err:
        raise ShapeError(f"grid is ragged: {err}") from err
    if arr.shape != (size, size):
        raise ShapeError(f"expected a {size}x{size} grid, got shape {arr.shape}")
    if arr.dtype.kind not in "biu":
        raise ShapeError(f"entries must be integers, got dtype {arr.dtype}")
    bad = np.argwhere((arr != 0) & (arr != 1))
    if bad.size:
        i, j = bad[0]
        raise ShapeError(
            f"non-binary entry {arr[i, j]} at ({int(i) + 1},{int(j) + 1})"
        )
    return arr.astype(np.uint8)


def validate_sperm(candidate, n: int) -> ValidityReport:
    """Check that a dense binary grid is an S-permutation matrix.

    Raises:
        ShapeError: If the grid is not n^2 x n^2 or has a non-binary entry.
    """
    arr = _as_dense(candidate, n)
    blocks = arr.reshape(n, n, n, n).sum(axis=(1, 3))
    return _count_violations(arr.sum(axis=1), arr.sum(axis=0), blocks)


@dataclass(frozen=True)
class SPermMatrix:
    """A validated S-permutation matrix held as its 0-based one positions."""

    n: int
    ones: Tuple[Position, ...]

    def __post_init__(self):
        n = self.n
        if isinstance(n, bool) or not isinstance(n, int) or n < 1:
            raise DomainError(f"block order must be a positive integer, got {n!r}")
        size = n * n
        ones = tuple((int(r), int(c)) for r, c in self.ones)
        for r, c in ones:
            if not (0 <= r < size and 0 <= c < size):
                raise ShapeError(
                    f"position ({r + 1},{c + 1}) outside a {size}x{size} grid"
                )

        rows = [0] * size
        cols = [0] * size
        blocks = np.zeros((n, n), dtype=np.int64)
        for r, c in ones:
            rows[r] += 1
            cols[c] += 1
            blocks[r // n, c // n] += 1
        report = _count_violations(rows, cols, blocks)
        if not report.ok:
            raise ValidationError(report, "S-permutation matrix")

        ones = tuple(sorted(ones, key=lambda p: (p[0] // n, p[1] // n)))
        object.__setattr__(self, "ones", ones)

    @property
    def size(self) -> int:
        """Return the side length n^2."""
        return self.n * self.n

    @classmethod
    def from_dense(cls, candidate, n: int) -> SPermMatrix:
        """Validate a dense 0/1 grid and convert it to the sparse form."""
        report = validate_sperm(candidate, n)
        if not report.ok:
            raise ValidationError(report, "S-permutation matrix")
        arr = np.asarray(candidate)
        return cls(n, tuple((int(r), int(c)) for r, c in np.argwhere(arr == 1)))

    def to_dense(self) -> np.ndarray:
        """Return the n^2 x n^2 uint8 array."""
        arr = np.zeros((self.size, self.size), dtype=np.uint8)
        rows, cols = zip(*self.ones)
        arr[list(rows), list(cols)] = 1
        return arr

    def one_in_block(self, k: int, l: int) -> Position:
        """Return the 0-based global position of the 1 in 0-based block (k, l)."""
        return self.ones[k * self.n + l]

    def __str__(self) -> str:
        return write_sperm(self)


def theta(m: Union[PiMatrix, Sequence[Sequence[Tuple[int, int]]]]) -> SPermMatrix:
    """Map a Pi_n-matrix to its S-permutation matrix.

    Cell (k, l) holding <a, b> becomes a 1 at 1-based global position
    ((k-1)n + a, (l-1)n + b). Raw grids are validated first.
    """
    if not isinstance(m, PiMatrix):
        m = PiMatrix.from_rows(m)
    n = m.n
    ones = tuple(
        (k * n + cell.a - 1, l * n + cell.b - 1)
        for k, row in enumerate(m.cells)
        for l, cell in enumerate(row)
    )
    return SPermMatrix(n, ones)


def theta_inv(s) -> PiMatrix:
    """Map an S-permutation matrix back to its Pi_n-matrix.

    Accepts an SPermMatrix or a dense square 0/1 grid whose side is a
    perfect square; dense input is validated first.
    """
    if not isinstance(s, SPermMatrix):
        arr = np.asarray(s)
        side = arr.shape[0] if arr.ndim == 2 else 0
        n = isqrt(side)
        if side == 0 or n * n != side:
            raise ShapeError(f"side {side} is not the square of a block order")
        s = SPermMatrix.from_dense(arr, n)
    n = s.n
    cells = []
    for k in range(n):
        row = []
        for l in range(n):
            r, c = s.one_in_block(k, l)
            row.append(Pair(r - k * n + 1, c - l * n + 1))
        cells.append(tuple(row))
    return PiMatrix(n, tuple(cells))


def sperm_disjoint(x: SPermMatrix, y: SPermMatrix) -> bool:
    """Return True if the two matrices share no 1-position."""
    if x.n != y.n:
        raise ShapeError(f"order mismatch: {x.n} vs {y.n}")
    return set(x.ones).isdisjoint(y.ones)


def count_sperm(n: int) -> int:
    """Return |Sigma_{n^2}| = (n!)^(2n), equal to |Pi_n| through theta."""
    return count_pi(n)


def parse_sperm_raw(text: str) -> List[Tuple[int, np.ndarray]]:
    """Parse S-permutation text into unvalidated ``(n, dense array)`` documents."""
    documents = []
    for doc in read_documents(text, lambda n: n * n, "S-permutation matrix"):
        size = doc.n * doc.n
        arr = np.zeros((size, size), dtype=np.int64)
        for r, (line_no, tokens) in enumerate(doc.rows):
            expect_width(tokens, size, line_no)
            arr[r] = [parse_int(token, line_no) for token in tokens]
        documents.append((doc.n, arr))
    return documents


def parse_sperm(text: str) -> List[SPermMatrix]:
    """Parse and validate every S-permutation matrix in ``text``."""
    return [SPermMatrix.from_dense(arr, n) for n, arr in parse_sperm_raw(text)]


def write_sperm(matrices: Union[SPermMatrix, Sequence[SPermMatrix]]) -> str:
    """Serialize one or more matrices in the dense 0/1 text format."""
    if isinstance(matrices, SPermMatrix):
        matrices = [matrices]
    documents = []
    for s in matrices:
        lines = [str(s.n)]
        lines.extend(" ".join(str(int(v)) for v in row) for row in s.to_dense())
        documents.append("\n".join(lines) + "\n")
    _LOGGER.debug("Serialized %d S-permutation matrices", len(documents))
    return join_documents(documents)
