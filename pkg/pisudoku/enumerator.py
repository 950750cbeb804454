"""Exact desk-scale counting of Pi_n-matrices and Sudoku matrices."""

from __future__ import annotations

from dataclasses import asdict, dataclass
import json
import logging
from pathlib import Path
import time
from typing import Dict, Optional, Union

from .const import (
    CELL_ORDER_NESTED,
    DEFAULT_WORKERS,
    MAX_SAFE_PI_ORDER,
    MAX_SAFE_SUDOKU_ORDER,
    PAIR_ORDER_AB,
    QUANTITY_PI,
    QUANTITY_SUDOKU,
    REFERENCE_COUNTS,
)
from .exceptions import EnumerationRefused, InputError
from .generator import ChoiceStrategy, PiTuple, explore_tuples, first_cell_branches
from .pi_core import Pair, count_pi, iter_pi_matrices
from .sudoku import assemble

_LOGGER = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class CountReport:
    """Result of one counting run.

    ``distinct`` is the number of distinct objects seen when the run checked
    injectivity, ``None`` otherwise. When ``complete`` is False the value is
    a lower bound.
    """

    n: int
    quantity: str
    value: int
    elapsed: float
    nodes: int = 0
    backtracks: int = 0
    complete: bool = True
    workers: int = 1
    distinct: Optional[int] = None

    @property
    def reference(self) -> Optional[int]:
        """Return the published count for this quantity, if one is known."""
        if self.quantity == QUANTITY_SUDOKU:
            return reference_count(self.n)
        return count_pi(self.n)

    @property
    def injective(self) -> Optional[bool]:
        """Return whether every visited object was distinct, if checked."""
        if self.distinct is None:
            return None
        return self.distinct == self.value

    def to_record(self) -> str:
        """Return a single-line ``key=value`` record."""
        fields = asdict(self)
        fields["elapsed"] = f"{self.elapsed:.6f}"
        return " ".join(
            f"{key}={_format_value(value)}" for key, value in fields.items()
        )

    def summary(self) -> str:
        """Return a human-readable sentence about the count."""
        noun = "Pi matrices" if self.quantity == QUANTITY_PI else "Sudoku matrices"
        bound = "" if self.complete else "at least "
        text = (
            f"Counted {bound}{self.value} {noun} of order {self.n} "
            f"in {self.elapsed:.3f}s"
        )
        reference = self.reference
        if reference is not None and self.complete:
            verdict = "matches" if reference == self.value else "DIFFERS FROM"
            text += f"; {verdict} the known value {reference}"
        if self.injective is False:
            text += f"; only {self.distinct} were distinct"
        return text + "."


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return str(value).lower()
    return str(value)


def reference_count(n: int) -> Optional[int]:
    """Return the known number of n^2 x n^2 Sudoku matrices, or None."""
    return REFERENCE_COUNTS.get(n)


def count_pi_enumerated(n: int, allow_large: bool = False) -> CountReport:
    """Count Pi_n-matrices by generating every PermutationTuple.

    Raises:
        DomainError: If n is not a positive integer.
        EnumerationRefused: If n exceeds the desk-scale bound without
            ``allow_large``.
    """
    expected = count_pi(n)
    if n > MAX_SAFE_PI_ORDER and not allow_large:
        raise EnumerationRefused(
            f"there are {expected} Pi matrices of order {n}; generating them "
            "one by one is infeasible. Pass --allow-large to try anyway"
        )

    start = time.perf_counter()
    seen = set() if n <= MAX_SAFE_PI_ORDER else None
    value = 0
    for matrix in iter_pi_matrices(n):
        value += 1
        if seen is not None:
            seen.add(matrix.cells)
    elapsed = time.perf_counter() - start

    if value != expected:
        _LOGGER.error(
            "Enumerated %d Pi matrices of order %d, expected %d", value, n, expected
        )
    _LOGGER.info("Counted %d Pi matrices of order %d in %.3fs", value, n, elapsed)
    return CountReport(
        n=n,
        quantity=QUANTITY_PI,
        value=value,
        elapsed=elapsed,
        nodes=value,
        distinct=None if seen is None else len(seen),
    )


def _load_checkpoint(
    path: Path, n: int, pair_order: str, cell_order: str
) -> Dict[str, int]:
    """Return the completed branch counts stored at ``path``."""
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise InputError(f"checkpoint {path} is not valid JSON: {err}") from err

    stored = (data.get("n"), data.get("pair_order"), data.get("cell_order"))
    if stored != (n, pair_order, cell_order):
        raise InputError(
            f"checkpoint {path} belongs to a different run "
            f"(n={stored[0]}, pair_order={stored[1]}, cell_order={stored[2]})"
        )
    branches = data.get("branches", {})
    _LOGGER.info("Resuming from %s with %d completed branches", path, len(branches))
    return {str(key): int(value) for key, value in branches.items()}


def _save_checkpoint(
    path: Path, n: int, pair_order: str, cell_order: str, branches: Dict[str, int]
) -> None:
    data = {
        "version": CHECKPOINT_VERSION,
        "n": n,
        "pair_order": pair_order,
        "cell_order": cell_order,
        "branches": branches,
    }
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    tmp.replace(path)
    _LOGGER.debug("Saved %d completed branches to %s", len(branches), path)


def count_sudoku(
    n: int,
    allow_large: bool = False,
    pair_order: str = PAIR_ORDER_AB,
    cell_order: str = CELL_ORDER_NESTED,
    workers: int = DEFAULT_WORKERS,
    node_limit: Optional[int] = None,
    checkpoint: Optional[Union[str, Path]] = None,
) -> CountReport:
    """Count Sudoku matrices of block order n by enumerating disjoint tuples.

    Serial desk-scale runs also assemble every tuple and check that no two
    give the same Sudoku matrix. With a ``checkpoint`` path, branches that
    finished in an earlier run are skipped and each newly finished branch is
    saved as soon as it completes.

    Raises:
        DomainError: If n or workers is not a positive integer.
        EnumerationRefused: If n exceeds the desk-scale bound without
            ``allow_large``.
        InputError: If the checkpoint belongs to another run.
    """
    count_pi(n)
    if n > MAX_SAFE_SUDOKU_ORDER and not allow_large:
        reference = reference_count(n)
        known = ""
        if reference is not None:
            known = f"there are {reference} Sudoku matrices of order {n}; "
        raise EnumerationRefused(
            f"{known}enumerating the Sudoku matrices of order {n} one by one is "
            "infeasible. Pass --allow-large for a partial, checkpointed run"
        )
    if n > MAX_SAFE_SUDOKU_ORDER:
        _LOGGER.warning(
            "Counting order %d is far beyond desk scale; expect an incomplete run", n
        )

    path = Path(checkpoint) if checkpoint is not None else None
    done = _load_checkpoint(path, n, pair_order, cell_order) if path else {}
    pending = [
        branch
        for branch in first_cell_branches(n, pair_order)
        if str(Pair.from_index(branch, n)) not in done
    ]

    seen: Optional[set] = None
    visitor = None
    if workers == 1 and n <= MAX_SAFE_SUDOKU_ORDER and not done:
        seen = set()

        def record(matrices: PiTuple) -> None:
            seen.add(assemble(matrices))

        visitor = record

    finished = dict(done)

    def save(key: str, count: int, complete: bool) -> None:
        if complete:
            finished[key] = count
            _save_checkpoint(path, n, pair_order, cell_order, finished)

    strategy = ChoiceStrategy.exhaustive(pair_order=pair_order, cell_order=cell_order)
    start = time.perf_counter()
    result = explore_tuples(
        n,
        visitor,
        allow_large=allow_large,
        strategy=strategy,
        workers=workers,
        node_limit=node_limit,
        branches=pending,
        on_branch=save if path is not None else None,
    )
    elapsed = time.perf_counter() - start
    if path is not None and not path.exists():
        _save_checkpoint(path, n, pair_order, cell_order, finished)

    value = result.count + sum(done.values())
    if seen is not None and len(seen) != value:
        _LOGGER.error(
            "%d tuples of order %d gave only %d distinct Sudoku matrices",
            value,
            n,
            len(seen),
        )
    _LOGGER.info(
        "Counted %d Sudoku matrices of order %d in %.3fs (%d nodes)",
        value,
        n,
        elapsed,
        result.stats.nodes,
    )
    return CountReport(
        n=n,
        quantity=QUANTITY_SUDOKU,
        value=value,
        elapsed=elapsed,
        nodes=result.stats.nodes,
        backtracks=result.stats.backtracks,
        complete=result.complete,
        workers=workers,
        distinct=None if seen is None else len(seen),
    )
