"""Tests for Pi_n-matrices and their permutation representation."""

from itertools import product

import pytest

from pisudoku.exceptions import (
    DomainError,
    InputError,
    ParseError,
    ShapeError,
    ValidationError,
)
from pisudoku.pi_core import (
    CONDITION_COLUMNS,
    CONDITION_RANGE,
    CONDITION_ROWS,
    Pair,
    PermutationTuple,
    PiMatrix,
    are_disjoint,
    count_pi,
    equal_components,
    from_permutations,
    iter_permutation_tuples,
    iter_pi_matrices,
    parse_pi,
    random_pi,
    to_permutations,
    validate_pi,
    write_pi,
)
from pisudoku.report import SCOPE_CELL, SCOPE_COLUMN, SCOPE_ROW


class TestPair:
    """Test the Pair value type."""

    def test_index_roundtrip(self):
        """Test the canonical index and its inverse for every pair of [3]x[3]."""
        for a, b in product(range(1, 4), repeat=2):
            pair = Pair(a, b)
            assert Pair.from_index(pair.index(3), 3) == pair
        assert Pair(1, 1).index(3) == 0
        assert Pair(3, 3).index(3) == 8
        assert Pair(2, 1).index(3) == 3

    def test_text_form(self):
        """Test parsing and printing of a:b."""
        assert Pair.parse("3:1") == Pair(3, 1)
        assert str(Pair(2, 3)) == "2:3"

    def test_parse_rejects_garbage(self):
        """Test that malformed tokens raise ValueError."""
        with pytest.raises(ValueError):
            Pair.parse("31")
        with pytest.raises(ValueError):
            Pair.parse("a:1")
        for token in ("+1:2", "1:0_2", "\u0661:1", " 1:1"):
            with pytest.raises(ValueError):
                Pair.parse(token)


class TestValidatePi:
    """Test validate_pi."""

    def test_example_matrices_are_valid(self, pi_prime, pi_double, pi_triple):
        """Test that the three worked example matrices pass."""
        for matrix in (pi_prime, pi_double, pi_triple):
            assert validate_pi(matrix.cells).ok

    def test_order_one(self):
        """Test the only Pi_1 matrix."""
        assert validate_pi([[(1, 1)]]).ok

    def test_row_violation(self, pi_prime):
        """Test that a repeated first component names its row."""
        rows = [list(row) for row in pi_prime.cells]
        rows[0][0] = Pair(2, 1)
        report = validate_pi(rows)

        assert not report.ok
        assert len(report) == 1
        violation = report.violations[0]
        assert violation.condition == CONDITION_ROWS
        assert violation.scope == SCOPE_ROW
        assert violation.index == 1
        assert "repeated 2" in violation.detail
        assert "missing 3" in violation.detail

    def test_column_violation(self, identity_pi2):
        """Test that a repeated second component names its column."""
        rows = [list(row) for row in identity_pi2.cells]
        rows[1][0] = Pair(1, 1)
        rows[1][1] = Pair(2, 2)
        report = validate_pi(rows)

        assert [v.condition for v in report] == [CONDITION_COLUMNS]
        assert report.by_scope(SCOPE_COLUMN)[0].index == 1

    def test_range_violation_reported_per_cell(self):
        """Test that out-of-range components are reported, not raised."""
        report = validate_pi([[(1, 3), (2, 1)], [(2, 1), (1, 2)]])

        cells = report.by_scope(SCOPE_CELL)
        assert len(cells) == 1
        assert cells[0].condition == CONDITION_RANGE
        assert cells[0].index == (1, 1)

    def test_all_violations_reported(self):
        """Test that every broken condition is listed."""
        report = validate_pi([[(1, 1), (1, 1)], [(1, 1), (1, 1)]])
        assert len(report.by_scope(SCOPE_ROW)) == 2
        assert len(report.by_scope(SCOPE_COLUMN)) == 2

    def test_shape_errors(self):
        """Test that non-square or non-pair grids raise ShapeError."""
        with pytest.raises(ShapeError):
            validate_pi([[(1, 1), (2, 2)]])
        with pytest.raises(ShapeError):
            validate_pi([])
        with pytest.raises(ShapeError):
            validate_pi([[1]])


class TestPiMatrix:
    """Test PiMatrix construction."""

    def test_invalid_matrix_raises_with_report(self):
        """Test that construction keeps the full report on the error."""
        with pytest.raises(ValidationError) as excinfo:
            PiMatrix.from_rows([[(1, 1), (1, 2)], [(2, 1), (2, 2)]])
        assert not excinfo.value.report.ok
        assert "condition ii" in str(excinfo.value)

    def test_cell_is_one_based(self, pi_prime):
        """Test the 1-based cell accessor."""
        assert pi_prime.cell(1, 1) == Pair(3, 1)
        assert pi_prime.cell(3, 2) == Pair(1, 3)

    def test_order_mismatch(self):
        """Test that the declared order must match the grid."""
        with pytest.raises(ShapeError):
            PiMatrix(2, ((Pair(1, 1),),))


class TestPermutations:
    """Test the 2n-permutation construction."""

    def test_identity_order_two(self):
        """Test that identity permutations put <j,i> at (i,j)."""
        identity = ((1, 2), (1, 2))
        matrix = from_permutations(PermutationTuple(identity, identity))
        assert matrix.cells == (
            (Pair(1, 1), Pair(2, 1)),
            (Pair(1, 2), Pair(2, 2)),
        )

    def test_order_one(self):
        """Test the single tuple of order one."""
        matrix = from_permutations(PermutationTuple(((1,),), ((1,),)))
        assert matrix.cells == ((Pair(1, 1),),)

    def test_mixed_permutations(self):
        """Test a hand-substituted example."""
        t = PermutationTuple(((2, 1), (1, 2)), ((1, 2), (2, 1)))
        assert from_permutations(t).cells == (
            (Pair(2, 1), Pair(1, 2)),
            (Pair(1, 2), Pair(2, 1)),
        )

    def test_to_permutations_reads_rows_and_columns(self, pi_prime):
        """Test that rho_1 is the first row's first components."""
        t = to_permutations(pi_prime)
        assert t.rho[0] == (3, 2, 1)
        assert t.sigma[0] == (1, 3, 2)

    def test_identity_inverse(self, identity_pi2):
        """Test that the identity matrix gives the all-identity tuple."""
        t = to_permutations(identity_pi2)
        assert t.rho == ((1, 2), (1, 2))
        assert t.sigma == ((1, 2), (1, 2))

    def test_roundtrip_random(self, rng):
        """Test both roundtrips on random matrices of order 3."""
        for _ in range(100):
            matrix = random_pi(3, rng)
            t = to_permutations(matrix)
            assert from_permutations(t) == matrix
            assert to_permutations(from_permutations(t)) == t

    def test_malformed_permutation(self):
        """Test that a repeated value is an input error."""
        with pytest.raises(InputError, match="rho_1"):
            PermutationTuple(((1, 1), (1, 2)), ((1, 2), (1, 2)))
        with pytest.raises(InputError):
            PermutationTuple(((1, 2), (1, 2)), ((1, 2),))

    @pytest.mark.parametrize("n", [1, 2])
    def test_exhaustive_bijection(self, n):
        """Test that every tuple gives a distinct valid matrix."""
        matrices = [from_permutations(t) for t in iter_permutation_tuples(n)]
        assert len(matrices) == count_pi(n)
        assert len({m.cells for m in matrices}) == count_pi(n)
        for matrix, t in zip(matrices, iter_permutation_tuples(n)):
            assert to_permutations(matrix) == t


class TestDisjointness:
    """Test are_disjoint and equal_components on the worked example."""

    def test_disjoint_pair(self, pi_prime, pi_double):
        """Test the pair with no common cell."""
        assert are_disjoint(pi_prime, pi_double)
        assert equal_components(pi_prime, pi_double) == []

    def test_two_equal_components(self, pi_prime, pi_triple):
        """Test the pair with two common cells."""
        assert not are_disjoint(pi_prime, pi_triple)
        assert equal_components(pi_prime, pi_triple) == [(1, 1), (2, 3)]

    def test_three_equal_components(self, pi_double, pi_triple):
        """Test the pair with three common cells, including (3,3)."""
        assert equal_components(pi_double, pi_triple) == [(1, 2), (3, 2), (3, 3)]

    def test_irreflexive(self, pi_prime):
        """Test that a matrix shares every cell with itself."""
        assert not are_disjoint(pi_prime, pi_prime)
        assert len(equal_components(pi_prime, pi_prime)) == 9

    def test_symmetric_and_consistent(self):
        """Test symmetry and agreement with equal_components at order 2."""
        matrices = list(iter_pi_matrices(2))
        for x in matrices:
            for y in matrices:
                assert are_disjoint(x, y) == are_disjoint(y, x)
                assert are_disjoint(x, y) == (not equal_components(x, y))

    def test_order_mismatch(self, pi_prime, identity_pi2):
        """Test that different orders raise ShapeError."""
        with pytest.raises(ShapeError):
            are_disjoint(pi_prime, identity_pi2)
        with pytest.raises(ShapeError):
            equal_components(pi_prime, identity_pi2)


class TestCountPi:
    """Test count_pi."""

    @pytest.mark.parametrize("n,expected", [(1, 1), (2, 16), (3, 46656)])
    def test_small_orders(self, n, expected):
        """Test the closed form at small orders."""
        assert count_pi(n) == expected

    def test_exact_large_value(self):
        """Test that large values stay exact integers."""
        assert count_pi(4) == 24**8
        assert count_pi(9) == 362880**18

    @pytest.mark.parametrize("n", [0, -1, 1.5, True])
    def test_domain_error(self, n):
        """Test that non-positive or non-integer orders are rejected."""
        with pytest.raises(DomainError):
            count_pi(n)


class TestPiText:
    """Test the Pi text format."""

    def test_write(self, pi_prime, pi_prime_text):
        """Test the canonical serialization."""
        assert write_pi(pi_prime) == pi_prime_text

    def test_parse(self, pi_prime, pi_prime_text):
        """Test parsing the canonical serialization."""
        assert parse_pi(pi_prime_text) == [pi_prime]

    def test_parse_tolerates_whitespace(self, pi_prime):
        """Test blank lines and runs of spaces."""
        text = "\n3\n3:1   2:1 1:2\n\n2:3 3:2 1:1\n3:2 1:3 2:3\n\n"
        assert parse_pi(text) == [pi_prime]

    def test_multiple_documents(self, pi_prime, pi_double):
        """Test a stream of two matrices."""
        text = write_pi([pi_prime, pi_double])
        assert "\n\n3\n" in text
        assert parse_pi(text) == [pi_prime, pi_double]

    def test_bad_token_line_number(self):
        """Test that a malformed pair reports its line."""
        with pytest.raises(ParseError) as excinfo:
            parse_pi("2\n1:1 2:1\n1:2 22\n")
        assert excinfo.value.line == 3

    def test_missing_trailing_newline(self):
        """Test that the trailing newline is required."""
        with pytest.raises(ParseError):
            parse_pi("1\n1:1")

    def test_invalid_matrix_text(self):
        """Test that a parsed but invalid matrix raises ValidationError."""
        with pytest.raises(ValidationError):
            parse_pi("2\n1:1 1:1\n2:2 2:2\n")
