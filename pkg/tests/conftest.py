"""Common fixtures for pisudoku tests."""

import random

import pytest

from pisudoku.pi_core import Pair, PiMatrix
from pisudoku.sudoku import SudokuMatrix


def _pi(rows):
    return PiMatrix.from_rows(
        [[Pair.parse(token) for token in row.split()] for row in rows]
    )


@pytest.fixture
def pi_prime():
    """Return the first Pi_3 matrix of the worked example."""
    return _pi(["3:1 2:1 1:2", "2:3 3:2 1:1", "3:2 1:3 2:3"])


@pytest.fixture
def pi_double():
    """Return the second Pi_3 matrix of the worked example."""
    return _pi(["3:2 1:3 2:1", "3:3 1:1 2:2", "2:1 1:2 3:3"])


@pytest.fixture
def pi_triple():
    """Return the third Pi_3 matrix of the worked example."""
    return _pi(["3:1 1:3 2:2", "2:2 3:1 1:1", "2:3 1:2 3:3"])


@pytest.fixture
def identity_pi2():
    """Return the Pi_2 matrix built from four identity permutations."""
    return _pi(["1:1 2:1", "1:2 2:2"])


@pytest.fixture
def grid_rows():
    """Return the rows of a 4x4 Sudoku matrix."""
    return [[1, 2, 3, 4], [3, 4, 1, 2], [2, 1, 4, 3], [4, 3, 2, 1]]


@pytest.fixture
def sudoku4(grid_rows):
    """Return the 4x4 Sudoku matrix."""
    return SudokuMatrix.from_rows(grid_rows)


@pytest.fixture
def grid_text():
    """Return the 4x4 Sudoku matrix in the grid text format."""
    return "2\n1 2 3 4\n3 4 1 2\n2 1 4 3\n4 3 2 1\n"


@pytest.fixture
def pi_prime_text():
    """Return the first example matrix in the Pi text format."""
    return "3\n3:1 2:1 1:2\n2:3 3:2 1:1\n3:2 1:3 2:3\n"


@pytest.fixture
def rng():
    """Return a seeded random generator."""
    return random.Random(20240101)
