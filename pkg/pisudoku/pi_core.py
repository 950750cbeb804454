"""Pi_n-matrices: n x n grids of ordered pairs.

A Pi_n-matrix holds pairs <a,b> with a, b in [n] such that the first
components of every row and the second components of every column are
permutations of [n]. Pair values are 1-based throughout; cell positions are
0-based inside the package and 1-based in reports and text.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
import logging
from math import factorial
import random
from typing import Iterator, List, NamedTuple, Sequence, Tuple, Union

from .exceptions import DomainError, InputError, ParseError, ShapeError, ValidationError
from .report import (
    SCOPE_CELL,
    SCOPE_COLUMN,
    SCOPE_ROW,
    ValidityReport,
    Violation,
    duplicates_and_missing,
)
from .textio import expect_width, is_decimal, join_documents, read_documents

_LOGGER = logging.getLogger(__name__)

CONDITION_RANGE = "condition i"
CONDITION_ROWS = "condition ii"
CONDITION_COLUMNS = "condition iii"


class Pair(NamedTuple):
    """Ordered pair <a,b> of [n] x [n]."""

    a: int
    b: int

    def index(self, n: int) -> int:
        """Return the canonical bitset index (a-1)*n + (b-1)."""
        return (self.a - 1) * n + (self.b - 1)

    @classmethod
    def from_index(cls, index: int, n: int) -> Pair:
        """Inverse of ``index``."""
        a, b = divmod(index, n)
        return cls(a + 1, b + 1)

    @classmethod
    def parse(cls, token: str) -> Pair:
        """Parse the ``a:b`` text form."""
        first, sep, second = token.partition(":")
        if not (sep and is_decimal(first) and is_decimal(second)):
            raise ValueError(f"{token!r} is not of the form a:b")
        return cls(int(first), int(second))

    def __str__(self) -> str:
        return f"{self.a}:{self.b}"


PairLike = Union[Pair, Tuple[int, int]]
Grid = Sequence[Sequence[PairLike]]


def _coerce_grid(candidate: Grid) -> Tuple[Tuple[Pair, ...], ...]:
    """Return ``candidate`` as a square tuple grid of Pairs or raise ShapeError."""
    try:
        rows = tuple(tuple(Pair(*cell) for cell in row) for row in candidate)
    except TypeError as err:
        raise ShapeError(f"entries must be ordered pairs: {err}") from err

    n = len(rows)
    if n == 0:
        raise ShapeError("empty grid")
    for i, row in enumerate(rows, start=1):
        if len(row) != n:
            raise ShapeError(
                f"grid is not square: row {i} has {len(row)} cells, expected {n}"
            )
        for cell in row:
            if not isinstance(cell.a, int) or not isinstance(cell.b, int):
                raise ShapeError(f"pair components must be integers, got {cell!r}")
    return rows


def validate_pi(candidate: Grid) -> ValidityReport:
    """Check the three defining conditions of a Pi_n-matrix.

    All violations are reported: condition i per offending cell, condition ii
    per row whose first components are not a permutation of [n], and
    condition iii per column whose second components are not.

    Raises:
        ShapeError: If the grid is not square or entries are not pairs.
    """
    rows = _coerce_grid(candidate)
    n = len(rows)
    expected = list(range(1, n + 1))
    violations: List[Violation] = []

    for i, row in enumerate(rows):
        for j, cell in enumerate(row):
            if not (1 <= cell.a <= n and 1 <= cell.b <= n):
                violations.append(
                    Violation(
                        CONDITION_RANGE,
                        SCOPE_CELL,
                        (i + 1, j + 1),
                        f"{cell} outside [{n}]x[{n}]",
                    )
                )

    for i, row in enumerate(rows):
        firsts = [cell.a for cell in row]
        if sorted(firsts) != expected:
            violations.append(
                Violation(
                    CONDITION_ROWS,
                    SCOPE_ROW,
                    i + 1,
                    "first components " + duplicates_and_missing(firsts, expected),
                )
            )

    for j in range(n):
        seconds = [rows[i][j].b for i in range(n)]
        if sorted(seconds) != expected:
            violations.append(
                Violation(
                    CONDITION_COLUMNS,
                    SCOPE_COLUMN,
                    j + 1,
                    "second components " + duplicates_and_missing(seconds, expected),
                )
            )

    return ValidityReport(tuple(violations))


@dataclass(frozen=True)
class PiMatrix:
    """A validated Pi_n-matrix. Construction raises ValidationError if invalid."""

    n: int
    cells: Tuple[Tuple[Pair, ...], ...]

    def __post_init__(self):
        cells = _coerce_grid(self.cells)
        if len(cells) != self.n:
            raise ShapeError(f"order {self.n} does not match a {len(cells)}-row grid")
        report = validate_pi(cells)
        if not report.ok:
            raise ValidationError(report, "Pi matrix")
        object.__setattr__(self, "cells", cells)

    @classmethod
    def from_rows(cls, rows: Grid) -> PiMatrix:
        """Build a matrix from nested rows of pairs, inferring the order."""
        return cls(len(rows), rows)

    def cell(self, i: int, j: int) -> Pair:
        """Return the pair at 1-based position (i, j)."""
        return self.cells[i - 1][j - 1]

    def __str__(self) -> str:
        return write_pi(self)


@dataclass(frozen=True)
class PermutationTuple:
    """The 2n permutations (rho_1..rho_n, sigma_1..sigma_n) describing a matrix.

    ``rho[i]`` lists the first components of row i; ``sigma[j]`` lists the
    second components of column j. Repeated permutations are allowed.
    """

    rho: Tuple[Tuple[int, ...], ...]
    sigma: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rho = tuple(tuple(p) for p in self.rho)
        sigma = tuple(tuple(p) for p in self.sigma)
        n = len(rho)
        if n == 0:
            raise InputError("a permutation tuple needs at least one permutation")
        if len(sigma) != n:
            raise InputError(f"expected {n} column permutations, got {len(sigma)}")
        expected = list(range(1, n + 1))
        for name, perms in (("rho", rho), ("sigma", sigma)):
            for idx, perm in enumerate(perms, start=1):
                if sorted(perm) != expected:
                    raise InputError(
                        f"{name}_{idx} = {' '.join(map(str, perm))} is not a "
                        f"permutation of [{n}]: "
                        f"{duplicates_and_missing(perm, expected)}"
                    )
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        """Return the order."""
        return len(self.rho)


def from_permutations(t: PermutationTuple) -> PiMatrix:
    """Build the matrix whose cell (i, j) is <rho_i(j), sigma_j(i)>."""
    n = t.n
    cells = tuple(
        tuple(Pair(t.rho[i][j], t.sigma[j][i]) for j in range(n)) for i in range(n)
    )
    return PiMatrix(n, cells)


def to_permutations(m: PiMatrix) -> PermutationTuple:
    """Read the row and column permutations back off a matrix."""
    n = m.n
    rho = tuple(tuple(m.cells[i][j].a for j in range(n)) for i in range(n))
    sigma = tuple(tuple(m.cells[i][j].b for i in range(n)) for j in range(n))
    return PermutationTuple(rho, sigma)


def _check_same_order(x: PiMatrix, y: PiMatrix) -> None:
    if x.n != y.n:
        raise ShapeError(f"order mismatch: {x.n} vs {y.n}")


def equal_components(x: PiMatrix, y: PiMatrix) -> List[Tuple[int, int]]:
    """Return the 1-based positions where both matrices hold the same pair."""
    _check_same_order(x, y)
    return [
        (i + 1, j + 1)
        for i in range(x.n)
        for j in range(x.n)
        if x.cells[i][j] == y.cells[i][j]
    ]


def are_disjoint(x: PiMatrix, y: PiMatrix) -> bool:
    """Return True if no position holds the same pair in both matrices."""
    _check_same_order(x, y)
    return all(
        px != py
        for row_x, row_y in zip(x.cells, y.cells)
        for px, py in zip(row_x, row_y)
    )


def count_pi(n: int) -> int:
    """Return |Pi_n| = (n!)^(2n) exactly."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DomainError(f"order must be a positive integer, got {n!r}")
    return factorial(n) ** (2 * n)


def iter_permutation_tuples(n: int) -> Iterator[PermutationTuple]:
    """Yield every PermutationTuple of order ``n`` in lexicographic order."""
    _LOGGER.debug("Enumerating %d permutation tuples of order %d", count_pi(n), n)
    perms = list(permutations(range(1, n + 1)))
    for rho in product(perms, repeat=n):
        for sigma in product(perms, repeat=n):
            yield PermutationTuple(rho, sigma)


def iter_pi_matrices(n: int) -> Iterator[PiMatrix]:
    """Yield every Pi_n-matrix exactly once."""
    for t in iter_permutation_tuples(n):
        yield from_permutations(t)


def random_pi(n: int, rng: random.Random) -> PiMatrix:
    """Draw a uniformly random Pi_n-matrix."""
    count_pi(n)
    values = range(1, n + 1)
    rho = tuple(tuple(rng.sample(values, n)) for _ in range(n))
    sigma = tuple(tuple(rng.sample(values, n)) for _ in range(n))
    return from_permutations(PermutationTuple(rho, sigma))


def parse_pi_raw(text: str) -> List[Tuple[int, Tuple[Tuple[Pair, ...], ...]]]:
    """Parse Pi-format text into unvalidated ``(n, grid)`` documents."""
    documents = []
    for doc in read_documents(text, lambda n: n, "Pi matrix"):
        grid = []
        for line_no, tokens in doc.rows:
            expect_width(tokens, doc.n, line_no)
            row = []
            for token in tokens:
                try:
                    row.append(Pair.parse(token))
                except ValueError:
                    raise ParseError(f"{token!r} is not a pair a:b", line_no)
            grid.append(tuple(row))
        documents.append((doc.n, tuple(grid)))
    return documents


def parse_pi(text: str) -> List[PiMatrix]:
    """Parse and validate every Pi matrix in ``text``."""
    return [PiMatrix(n, grid) for n, grid in parse_pi_raw(text)]


def write_pi(matrices: Union[PiMatrix, Sequence[PiMatrix]]) -> str:
    """Serialize one or more matrices in the Pi text format."""
    if isinstance(matrices, PiMatrix):
        matrices = [matrices]
    documents = []
    for m in matrices:
        lines = [str(m.n)]
        lines.extend(" ".join(str(cell) for cell in row) for row in m.cells)
        documents.append("\n".join(lines) + "\n")
    return join_documents(documents)
