"""Tests for S-permutation matrices and the theta bijection."""

import numpy as np
import pytest

from pisudoku.exceptions import DomainError, ParseError, ShapeError, ValidationError
from pisudoku.pi_core import are_disjoint, iter_pi_matrices, random_pi
from pisudoku.report import SCOPE_BLOCK, SCOPE_COLUMN, SCOPE_ROW
from pisudoku.sperm import (
    SPermMatrix,
    count_sperm,
    parse_sperm,
    sperm_disjoint,
    theta,
    theta_inv,
    validate_sperm,
    write_sperm,
)

THETA_IDENTITY = "2\n1 0 0 0\n0 0 1 0\n0 1 0 0\n0 0 0 1\n"


class TestTheta:
    """Test theta and its inverse."""

    def test_identity_order_two(self, identity_pi2):
        """Test the hand-traced image of the identity matrix."""
        s = theta(identity_pi2)
        assert s.ones == ((0, 0), (1, 2), (2, 1), (3, 3))
        assert write_sperm(s) == THETA_IDENTITY

    def test_order_one(self):
        """Test the 1x1 case."""
        s = theta([[(1, 1)]])
        assert s.to_dense().tolist() == [[1]]

    def test_exactly_n_squared_ones(self, pi_prime):
        """Test that the image has one 1 per block."""
        s = theta(pi_prime)
        assert len(s.ones) == 9
        assert int(s.to_dense().sum()) == 9

    def test_inverse_of_identity_image(self, identity_pi2):
        """Test theta_inv on a dense grid."""
        dense = np.zeros((4, 4), dtype=int)
        for r, c in ((0, 0), (1, 2), (2, 1), (3, 3)):
            dense[r, c] = 1
        assert theta_inv(dense) == identity_pi2

    def test_identity_permutation_matrix_rejected(self):
        """Test that the 4x4 identity leaves two blocks empty."""
        with pytest.raises(ValidationError) as excinfo:
            theta_inv(np.eye(4, dtype=int))
        blocks = excinfo.value.report.by_scope(SCOPE_BLOCK)
        assert {v.index for v in blocks} >= {(1, 2), (2, 1)}

    def test_invalid_pi_rejected(self):
        """Test that theta validates raw input."""
        with pytest.raises(ValidationError):
            theta([[(1, 1), (1, 2)], [(2, 1), (2, 2)]])

    def test_non_square_side(self):
        """Test that a side that is not a square is a shape error."""
        with pytest.raises(ShapeError):
            theta_inv(np.zeros((3, 3), dtype=int))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_roundtrip_random(self, n, rng):
        """Test both roundtrips on 1000 random matrices."""
        for _ in range(1000):
            matrix = random_pi(n, rng)
            image = theta(matrix)
            assert theta_inv(image) == matrix
            assert theta(theta_inv(image)) == image

    def test_exhaustive_order_two(self):
        """Test that the 16 Pi_2 matrices have 16 distinct valid images."""
        images = {theta(m) for m in iter_pi_matrices(2)}
        assert len(images) == 16 == count_sperm(2)
        for image in images:
            assert validate_sperm(image.to_dense(), 2).ok


class TestValidateSperm:
    """Test validate_sperm."""

    def test_image_is_valid(self, pi_prime):
        """Test that theta images pass."""
        assert validate_sperm(theta(pi_prime).to_dense(), 3).ok

    def test_all_zero(self):
        """Test that an all-zero grid fails every family."""
        report = validate_sperm(np.zeros((4, 4), dtype=int), 2)
        assert len(report.by_scope(SCOPE_ROW)) == 4
        assert len(report.by_scope(SCOPE_COLUMN)) == 4
        assert len(report.by_scope(SCOPE_BLOCK)) == 4

    def test_two_ones_in_row(self, identity_pi2):
        """Test that an extra 1 names its row."""
        dense = theta(identity_pi2).to_dense()
        dense[0, 1] = 1
        report = validate_sperm(dense, 2)
        rows = report.by_scope(SCOPE_ROW)
        assert [v.index for v in rows] == [1]
        assert rows[0].detail == "found 2"

    def test_non_binary(self):
        """Test that entries other than 0 and 1 are shape errors."""
        dense = np.zeros((4, 4), dtype=int)
        dense[2, 3] = 2
        with pytest.raises(ShapeError, match=r"\(3,4\)"):
            validate_sperm(dense, 2)

    def test_wrong_shape(self):
        """Test that the grid must be n^2 x n^2."""
        with pytest.raises(ShapeError):
            validate_sperm(np.zeros((3, 4), dtype=int), 2)
        with pytest.raises(DomainError):
            validate_sperm(np.zeros((4, 4), dtype=int), 0)


class TestSPermMatrix:
    """Test the sparse S-permutation type."""

    def test_ones_sorted_by_block(self):
        """Test that positions are stored in block row-major order."""
        s = SPermMatrix(2, ((3, 3), (2, 1), (1, 2), (0, 0)))
        assert s.ones == ((0, 0), (1, 2), (2, 1), (3, 3))
        assert s.one_in_block(1, 0) == (2, 1)

    def test_invalid_positions(self):
        """Test that a duplicated row is rejected."""
        with pytest.raises(ValidationError):
            SPermMatrix(2, ((0, 0), (0, 2), (2, 1), (3, 3)))
        with pytest.raises(ShapeError):
            SPermMatrix(2, ((0, 0), (1, 2), (2, 1), (4, 3)))

    def test_from_dense_roundtrip(self, pi_prime):
        """Test the dense boundary."""
        s = theta(pi_prime)
        assert SPermMatrix.from_dense(s.to_dense(), 3) == s


class TestSpermDisjoint:
    """Test binary disjointness."""

    def test_example_pairs(self, pi_prime, pi_double, pi_triple):
        """Test the worked example through theta."""
        assert sperm_disjoint(theta(pi_prime), theta(pi_double))
        assert not sperm_disjoint(theta(pi_double), theta(pi_triple))
        assert not sperm_disjoint(theta(pi_prime), theta(pi_prime))

    def test_agrees_with_pi_disjointness(self):
        """Test all 16 x 16 ordered pairs of order two."""
        matrices = list(iter_pi_matrices(2))
        agree = sum(
            are_disjoint(x, y) == sperm_disjoint(theta(x), theta(y))
            for x in matrices
            for y in matrices
        )
        assert agree == 256

    def test_order_mismatch(self, pi_prime, identity_pi2):
        """Test that different orders raise ShapeError."""
        with pytest.raises(ShapeError):
            sperm_disjoint(theta(pi_prime), theta(identity_pi2))


class TestSpermText:
    """Test the S-permutation text format."""

    def test_parse(self, identity_pi2):
        """Test parsing a single document."""
        assert parse_sperm(THETA_IDENTITY) == [theta(identity_pi2)]

    def test_multiple_documents(self, pi_prime, pi_double):
        """Test a stream of two matrices."""
        parts = [theta(pi_prime), theta(pi_double)]
        assert parse_sperm(write_sperm(parts)) == parts

    def test_invalid_matrix(self):
        """Test that a parsed but invalid matrix raises ValidationError."""
        with pytest.raises(ValidationError):
            parse_sperm("2\n1 0 0 0\n0 1 0 0\n0 0 1 0\n0 0 0 1\n")

    def test_wrong_width(self):
        """Test that a short row reports its line."""
        with pytest.raises(ParseError) as excinfo:
            parse_sperm("2\n1 0 0 0\n0 0 1\n0 1 0 0\n0 0 0 1\n")
        assert excinfo.value.line == 3
