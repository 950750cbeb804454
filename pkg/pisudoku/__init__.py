"""Sudoku matrices from n^2-tuples of mutually disjoint Pi_n-matrices."""

from .enumerator import CountReport, count_pi_enumerated, count_sudoku, reference_count
from .exceptions import (
    ArityError,
    BudgetExhausted,
    CompositionError,
    ContractViolation,
    DomainError,
    EnumerationRefused,
    InputError,
    ParseError,
    PiSudokuError,
    RangeError,
    ShapeError,
    ValidationError,
)
from .generator import (
    CandidateGrid,
    ChoiceStrategy,
    GenerationBudget,
    GenerationResult,
    enumerate_tuples,
    generate_tuple,
)
from .pi_core import (
    Pair,
    PermutationTuple,
    PiMatrix,
    are_disjoint,
    count_pi,
    equal_components,
    from_permutations,
    to_permutations,
    validate_pi,
)
from .report import ValidityReport, Violation
from .sperm import (
    SPermMatrix,
    count_sperm,
    sperm_disjoint,
    theta,
    theta_inv,
    validate_sperm,
)
from .sudoku import (
    SudokuMatrix,
    assemble,
    compose,
    decompose,
    generate_sudoku,
    validate_sudoku,
)

__version__ = "1.0.0"

__all__ = [
    "ArityError",
    "BudgetExhausted",
    "CandidateGrid",
    "ChoiceStrategy",
    "CompositionError",
    "ContractViolation",
    "CountReport",
    "DomainError",
    "EnumerationRefused",
    "GenerationBudget",
    "GenerationResult",
    "InputError",
    "Pair",
    "ParseError",
    "PermutationTuple",
    "PiMatrix",
    "PiSudokuError",
    "RangeError",
    "SPermMatrix",
    "ShapeError",
    "SudokuMatrix",
    "ValidationError",
    "ValidityReport",
    "Violation",
    "are_disjoint",
    "assemble",
    "compose",
    "count_pi",
    "count_pi_enumerated",
    "count_sperm",
    "count_sudoku",
    "decompose",
    "enumerate_tuples",
    "equal_components",
    "from_permutations",
    "generate_sudoku",
    "generate_tuple",
    "reference_count",
    "sperm_disjoint",
    "theta",
    "theta_inv",
    "to_permutations",
    "validate_pi",
    "validate_sperm",
    "validate_sudoku",
]
