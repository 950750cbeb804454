"""Generation of n^2-tuples of mutually disjoint Pi_n-matrices.

The working state is a candidate grid: for each of the n^2 target matrices
(layers) and each of their n x n cells, the set of pairs still consistent with
every decision made so far. Sets are bitsets over the canonical pair index.
Deciding a cell removes its pair from the same cell of the undecided layers,
pairs with the same first component from the undecided cells of its row, and
pairs with the same second component from the undecided cells of its column.
Every removal is logged on a trail so that a depth-first search can undo it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
import hashlib
import logging
import multiprocessing
import random
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .const import (
    CELL_ORDER_NESTED,
    CELL_ORDERS,
    DEFAULT_MAX_BACKTRACKS,
    DEFAULT_MAX_RESTARTS,
    MAX_SAFE_SUDOKU_ORDER,
    MODE_EXHAUSTIVE,
    MODE_FIRST,
    MODE_RANDOM,
    MODES,
    PAIR_ORDER_AB,
    PAIR_ORDER_BA,
    PAIR_ORDERS,
    SEED_BITS,
)
from .exceptions import ContractViolation, DomainError, EnumerationRefused, InputError
from .pi_core import Pair, PiMatrix, count_pi

_LOGGER = logging.getLogger(__name__)

# Trail entries with no removed bits record a decision
_DECISION = 0

# Search outcomes
OUTCOME_EXHAUSTED = "exhausted"
OUTCOME_STOPPED = "stopped"
OUTCOME_BUDGET = "budget"
OUTCOME_NODE_LIMIT = "node_limit"

PiTuple = Tuple[PiMatrix, ...]
Visitor = Callable[[PiTuple], Optional[bool]]
BranchCallback = Callable[[str, int, bool], None]


def derive_seed(seed: int, restart: int) -> int:
    """Return the seed of the given restart; restart 0 keeps ``seed``."""
    if restart == 0:
        return seed
    digest = hashlib.sha256(f"{seed}:{restart}".encode("utf-8")).digest()
    return int.from_bytes(digest[: SEED_BITS // 8], byteorder="big")


@dataclass(frozen=True)
class ChoiceStrategy:
    """How the search picks a pair for the cursor cell.

    ``first`` tries candidates in ``pair_order``; ``random`` shuffles them
    with a generator seeded from ``seed``; ``exhaustive`` tries every
    candidate and keeps going after the first complete tuple.
    """

    mode: str = MODE_FIRST
    seed: Optional[int] = None
    pair_order: str = PAIR_ORDER_AB
    cell_order: str = CELL_ORDER_NESTED

    def __post_init__(self):
        if self.mode not in MODES:
            raise InputError(f"unknown choice mode {self.mode!r}")
        if self.pair_order not in PAIR_ORDERS:
            raise InputError(f"unknown pair order {self.pair_order!r}")
        if self.cell_order not in CELL_ORDERS:
            raise InputError(f"unknown cell order {self.cell_order!r}")
        if self.mode == MODE_RANDOM:
            if not isinstance(self.seed, int) or not 0 <= self.seed < 2**SEED_BITS:
                raise InputError(
                    f"random mode needs a seed in [0, 2**{SEED_BITS}), "
                    f"got {self.seed!r}"
                )

    @classmethod
    def first(cls, **kwargs) -> ChoiceStrategy:
        """Lexicographically smallest candidate first."""
        return cls(mode=MODE_FIRST, **kwargs)

    @classmethod
    def random(cls, seed: int, **kwargs) -> ChoiceStrategy:
        """Seeded random choice."""
        return cls(mode=MODE_RANDOM, seed=seed, **kwargs)

    @classmethod
    def exhaustive(cls, **kwargs) -> ChoiceStrategy:
        """Visit every candidate."""
        return cls(mode=MODE_EXHAUSTIVE, **kwargs)


@dataclass(frozen=True)
class GenerationBudget:
    """Backtracks allowed per attempt and restarts allowed after the first."""

    max_backtracks: int = DEFAULT_MAX_BACKTRACKS
    max_restarts: int = DEFAULT_MAX_RESTARTS

    def __post_init__(self):
        for name in ("max_backtracks", "max_restarts"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")


class Mark(NamedTuple):
    """A trail position to undo to."""

    length: int
    serial: int
    cursor: int


class Removal(NamedTuple):
    """Bits removed from one cell, logged on the trail."""

    cell: int
    bits: int
    serial: int


class PropagationResult(NamedTuple):
    """Removals made by one decision and the cells they emptied."""

    removals: List[Removal]
    emptied: List[int]


class CandidateGrid:
    """Candidate sets of all n^2 layers with an undo trail.

    Cells are addressed by flat index ``k*n^2 + i*n + j`` (layer k, row i,
    column j, all 0-based), which is also the nested visit order. Not safe
    to share between threads while mutating.
    """

    def __init__(self, n: int, cell_order: str = CELL_ORDER_NESTED):
        """Initialize every cell of every layer with all n^2 pairs."""
        count_pi(n)
        if cell_order not in CELL_ORDERS:
            raise InputError(f"unknown cell order {cell_order!r}")
        self._n = n
        self._area = n * n
        self._total = self._area * self._area
        self._full = (1 << self._area) - 1
        self._cell_order = cell_order
        self._sets = [self._full] * self._total
        self._decided = [False] * self._total
        self._trail: List[Removal] = []
        self._serial = 0
        self._cursor = 0

        self._first_masks = [
            sum(1 << (a * n + b) for b in range(n)) for a in range(n)
        ]
        self._second_masks = [
            sum(1 << (a * n + b) for a in range(n)) for b in range(n)
        ]
        self._layer_peers: List[Tuple[int, ...]] = []
        self._row_peers: List[Tuple[int, ...]] = []
        self._col_peers: List[Tuple[int, ...]] = []
        for cell in range(self._total):
            k, i, j = self.position(cell)
            self._layer_peers.append(
                tuple(self.index(t, i, j) for t in range(self._area) if t != k)
            )
            self._row_peers.append(
                tuple(self.index(k, i, t) for t in range(n) if t != j)
            )
            self._col_peers.append(
                tuple(self.index(k, t, j) for t in range(n) if t != i)
            )

    @property
    def n(self) -> int:
        """Return the order."""
        return self._n

    @property
    def cell_count(self) -> int:
        """Return the number of cells over all layers, n^4."""
        return self._total

    @property
    def cursor(self) -> int:
        """Return the flat index of the next cell to decide."""
        return self._cursor

    @property
    def complete(self) -> bool:
        """Return True once every cell of every layer is decided."""
        return self._cursor >= self._total

    @property
    def trail_length(self) -> int:
        """Return the number of trail entries."""
        return len(self._trail)

    def index(self, k: int, i: int, j: int) -> int:
        """Return the flat index of 0-based layer k, row i, column j."""
        return k * self._area + i * self._n + j

    def position(self, cell: int) -> Tuple[int, int, int]:
        """Inverse of ``index``."""
        k, rest = divmod(cell, self._area)
        i, j = divmod(rest, self._n)
        return k, i, j

    def bits(self, cell: int) -> int:
        """Return the candidate bitset of a cell."""
        return self._sets[cell]

    def candidates(self, k: int, i: int, j: int) -> set:
        """Return the candidate pairs of a cell."""
        return set(self.pairs_of(self._sets[self.index(k, i, j)]))

    def pairs_of(self, bits: int) -> List[Pair]:
        """Decode a bitset into pairs in canonical order."""
        return [Pair.from_index(idx, self._n) for idx in _bit_indices(bits)]

    def is_decided(self, cell: int) -> bool:
        """Return True if a pair has been chosen for the cell."""
        return self._decided[cell]

    def snapshot(self) -> Tuple[Tuple[int, ...], Tuple[bool, ...], int]:
        """Return an immutable copy of the sets, decided flags and cursor."""
        return tuple(self._sets), tuple(self._decided), self._cursor

    def mark(self) -> Mark:
        """Return a mark for the current trail position."""
        serial = self._trail[-1].serial if self._trail else 0
        return Mark(len(self._trail), serial, self._cursor)

    def propagate(self, k: int, i: int, j: int, pair: Pair) -> PropagationResult:
        """Decide ``pair`` at the cursor cell and propagate it.

        Raises:
            ContractViolation: If (k, i, j) is not the cursor cell or the pair
                is not one of its candidates.
        """
        cell = self.index(k, i, j)
        if cell != self._cursor:
            raise ContractViolation(
                f"cell {(k, i, j)} is not the cursor cell {self.position(self._cursor)}"
            )
        pair = Pair(*pair)
        if not (1 <= pair.a <= self._n and 1 <= pair.b <= self._n):
            raise ContractViolation(f"pair {pair} outside [{self._n}]x[{self._n}]")
        index = pair.index(self._n)
        if not self._sets[cell] >> index & 1:
            raise ContractViolation(f"pair {pair} is not a candidate of {(k, i, j)}")
        return self.decide(index)

    def decide(self, index: int) -> PropagationResult:
        """Decide the pair with canonical ``index`` at the cursor cell.

        Callers guarantee the pair is a candidate of the cursor cell.
        """
        cell = self._cursor
        sets = self._sets
        decided = self._decided
        start = len(self._trail)
        emptied: List[int] = []
        bit = 1 << index

        self._log(cell, _DECISION)
        decided[cell] = True
        self._remove(cell, sets[cell] & ~bit, emptied)

        for peer in self._layer_peers[cell]:
            if not decided[peer] and sets[peer] & bit:
                self._remove(peer, bit, emptied)
        mask = self._first_masks[index // self._n]
        for peer in self._row_peers[cell]:
            if not decided[peer] and sets[peer] & mask:
                self._remove(peer, mask, emptied)
        mask = self._second_masks[index % self._n]
        for peer in self._col_peers[cell]:
            if not decided[peer] and sets[peer] & mask:
                self._remove(peer, mask, emptied)

        self._cursor = self._next_cursor()
        removals = [entry for entry in self._trail[start:] if entry.bits != _DECISION]
        return PropagationResult(removals, emptied)

    def undo(self, mark: Mark) -> None:
        """Reinsert every removal made after ``mark`` and rewind the cursor.

        Raises:
            ContractViolation: If the mark was not issued on the current trail.
        """
        trail = self._trail
        length = mark.length
        if length > len(trail) or (
            trail[length - 1].serial if length else 0
        ) != mark.serial:
            raise ContractViolation(f"stale or invalid mark {mark}")
        sets = self._sets
        while len(trail) > length:
            cell, bits, _ = trail.pop()
            if bits == _DECISION:
                self._decided[cell] = False
            else:
                sets[cell] |= bits
        self._cursor = mark.cursor

    def extract(self) -> Tuple[PiMatrix, ...]:
        """Return the n^2 decided layers as Pi_n-matrices.

        Raises:
            ContractViolation: If some cell is still undecided.
        """
        if not self.complete:
            raise ContractViolation("the candidate grid is not complete")
        n = self._n
        layers = []
        for k in range(self._area):
            cells = tuple(
                tuple(
                    Pair.from_index(self._sets[self.index(k, i, j)].bit_length() - 1, n)
                    for j in range(n)
                )
                for i in range(n)
            )
            layers.append(PiMatrix(n, cells))
        return tuple(layers)

    def _log(self, cell: int, bits: int) -> None:
        self._serial += 1
        self._trail.append(Removal(cell, bits, self._serial))

    def _remove(self, cell: int, bits: int, emptied: List[int]) -> None:
        hit = self._sets[cell] & bits
        if not hit:
            return
        self._sets[cell] ^= hit
        self._log(cell, hit)
        if not self._sets[cell]:
            emptied.append(cell)

    def _next_cursor(self) -> int:
        if self._cell_order == CELL_ORDER_NESTED:
            cell = self._cursor + 1
            while cell < self._total and self._decided[cell]:
                cell += 1
            return cell
        best = self._total
        best_count = self._area + 1
        for cell in range(self._total):
            if self._decided[cell]:
                continue
            count = self._sets[cell].bit_count()
            if count < best_count:
                best, best_count = cell, count
                if count <= 1:
                    break
        return best


def _bit_indices(bits: int) -> List[int]:
    indices = []
    while bits:
        low = bits & -bits
        indices.append(low.bit_length() - 1)
        bits ^= low
    return indices


def order_candidates(bits: int, n: int, pair_order: str) -> List[int]:
    """Return the candidate indices of ``bits`` in the requested pair order."""
    indices = _bit_indices(bits)
    if pair_order == PAIR_ORDER_BA:
        indices.sort(key=lambda idx: (idx % n, idx // n))
    return indices


@dataclass
class SearchStats:
    """Counters of one search or a merge of several."""

    nodes: int = 0
    backtracks: int = 0
    restarts: int = 0
    solutions: int = 0

    def merge(self, other: SearchStats) -> SearchStats:
        """Return the field-wise sum."""
        return SearchStats(
            nodes=self.nodes + other.nodes,
            backtracks=self.backtracks + other.backtracks,
            restarts=self.restarts + other.restarts,
            solutions=self.solutions + other.solutions,
        )


class TupleSearch:
    """Chronological depth-first search over the pair choices of each cell."""

    def __init__(
        self,
        n: int,
        strategy: ChoiceStrategy,
        rng: Optional[random.Random] = None,
    ):
        """Initialize a fresh grid for ``n``."""
        self._n = n
        self._strategy = strategy
        self._rng = rng
        self.grid = CandidateGrid(n, strategy.cell_order)
        self.stats = SearchStats()

    def _ordered(self, bits: int) -> List[int]:
        indices = order_candidates(bits, self._n, self._strategy.pair_order)
        if self._rng is not None:
            self._rng.shuffle(indices)
        return indices

    def run(
        self,
        on_complete: Callable[[CandidateGrid], bool],
        max_backtracks: Optional[int] = None,
        node_limit: Optional[int] = None,
    ) -> str:
        """Search below the current grid state.

        ``on_complete`` is called for every complete grid; returning True
        stops the search. Decisions taken before ``run`` are never undone.

        Returns:
            One of the ``OUTCOME_*`` constants.
        """
        grid = self.grid
        stats = self.stats
        stack: List[Tuple[Mark, Iterable[int]]] = []
        descend = True

        while True:
            if descend:
                if grid.complete:
                    stats.solutions += 1
                    if on_complete(grid):
                        return OUTCOME_STOPPED
                else:
                    cell = grid.cursor
                    stack.append((grid.mark(), iter(self._ordered(grid.bits(cell)))))

            descend = False
            while stack:
                mark, candidates = stack[-1]
                grid.undo(mark)
                index = next(candidates, None)
                if index is None:
                    stack.pop()
                    stats.backtracks += 1
                    if max_backtracks is not None and stats.backtracks > max_backtracks:
                        return OUTCOME_BUDGET
                    continue
                result = grid.decide(index)
                stats.nodes += 1
                if node_limit is not None and stats.nodes > node_limit:
                    return OUTCOME_NODE_LIMIT
                if result.emptied:
                    continue
                descend = True
                break

            if not descend:
                return OUTCOME_EXHAUSTED


@dataclass(frozen=True)
class GenerationResult:
    """Outcome of ``generate_tuple``; ``matrices`` is None on failure."""

    n: int
    matrices: Optional[PiTuple]
    strategy: ChoiceStrategy
    stats: SearchStats
    seed: Optional[int] = None

    @property
    def succeeded(self) -> bool:
        """Return True if a complete tuple was found."""
        return self.matrices is not None


def generate_tuple(
    n: int,
    strategy: Optional[ChoiceStrategy] = None,
    budget: Optional[GenerationBudget] = None,
    visitor: Optional[Visitor] = None,
) -> GenerationResult:
    """Produce n^2 mutually disjoint Pi_n-matrices.

    Cells are visited in the strategy's cell order (layer, row, column
    nesting by default). On a dead end the search backtracks
    chronologically. In random mode an attempt that exceeds
    ``budget.max_backtracks`` is restarted with a derived seed, at most
    ``budget.max_restarts`` times. The deterministic ``first`` mode gets one
    attempt with the whole allowance, ``max_backtracks * (max_restarts + 1)``.
    ``exhaustive`` mode ignores the budget, passes every tuple to ``visitor``
    and returns the first one.

    Returns:
        A GenerationResult whose ``matrices`` is None when the budget ran out.
    """
    count_pi(n)
    strategy = strategy or ChoiceStrategy()
    budget = budget or GenerationBudget()
    found: List[PiTuple] = []

    def on_complete(grid: CandidateGrid) -> bool:
        matrices = grid.extract()
        if not found:
            found.append(matrices)
        if visitor is not None:
            visitor(matrices)
        return strategy.mode != MODE_EXHAUSTIVE

    if strategy.mode == MODE_EXHAUSTIVE:
        search = TupleSearch(n, strategy)
        search.run(on_complete)
        _LOGGER.info(
            "Exhaustive search of order %d visited %d tuples", n, search.stats.solutions
        )
        return GenerationResult(n, found[0] if found else None, strategy, search.stats)

    if strategy.mode == MODE_FIRST:
        search = TupleSearch(n, strategy)
        allowance = budget.max_backtracks * (budget.max_restarts + 1)
        outcome = search.run(on_complete, max_backtracks=allowance)
        if outcome != OUTCOME_STOPPED:
            _LOGGER.warning(
                "No tuple of order %d found within %d backtracks", n, allowance
            )
            return GenerationResult(n, None, strategy, search.stats)
        return GenerationResult(n, found[0], strategy, search.stats)

    stats = SearchStats()
    seed = strategy.seed
    for restart in range(budget.max_restarts + 1):
        seed = derive_seed(strategy.seed, restart)
        search = TupleSearch(n, strategy, random.Random(seed))
        outcome = search.run(on_complete, max_backtracks=budget.max_backtracks)
        stats = stats.merge(search.stats)
        if outcome == OUTCOME_STOPPED:
            stats.restarts = restart
            _LOGGER.info(
                "Generated a tuple of order %d after %d restarts (%d nodes)",
                n,
                restart,
                stats.nodes,
            )
            return GenerationResult(n, found[0], strategy, stats, seed)
        _LOGGER.debug(
            "Attempt %d/%d for order %d ended with %s after %d backtracks",
            restart + 1,
            budget.max_restarts + 1,
            n,
            outcome,
            search.stats.backtracks,
        )

    stats.restarts = budget.max_restarts
    _LOGGER.warning(
        "Budget exhausted for order %d: %d restarts of %d backtracks each",
        n,
        budget.max_restarts,
        budget.max_backtracks,
    )
    return GenerationResult(n, None, strategy, stats, seed)


@dataclass
class EnumerationResult:
    """Outcome of a (possibly partial) enumeration."""

    n: int
    count: int = 0
    complete: bool = True
    stats: SearchStats = field(default_factory=SearchStats)
    branch_counts: Dict[str, int] = field(default_factory=dict)
    incomplete_branches: List[str] = field(default_factory=list)


def _explore_branch(
    n: int,
    strategy: ChoiceStrategy,
    branch: int,
    visitor: Optional[Visitor],
    node_limit: Optional[int],
) -> Tuple[int, SearchStats, bool]:
    """Count the complete tuples below one choice for the first cell."""
    search = TupleSearch(n, strategy)
    count = 0

    def on_complete(grid: CandidateGrid) -> bool:
        nonlocal count
        count += 1
        if visitor is not None:
            visitor(grid.extract())
        return False

    result = search.grid.decide(branch)
    search.stats.nodes += 1
    if result.emptied:
        return 0, search.stats, True
    outcome = search.run(on_complete, node_limit=node_limit)
    return count, search.stats, outcome == OUTCOME_EXHAUSTED


def _explore_branch_worker(args) -> Tuple[int, int, SearchStats, bool]:
    n, pair_order, cell_order, branch, node_limit = args
    strategy = ChoiceStrategy.exhaustive(pair_order=pair_order, cell_order=cell_order)
    count, stats, complete = _explore_branch(n, strategy, branch, None, node_limit)
    return branch, count, stats, complete


def first_cell_branches(n: int, pair_order: str = PAIR_ORDER_AB) -> List[int]:
    """Return the candidate indices of the first cell in iteration order."""
    return order_candidates((1 << (n * n)) - 1, n, pair_order)


def explore_tuples(
    n: int,
    visitor: Optional[Visitor] = None,
    allow_large: bool = False,
    strategy: Optional[ChoiceStrategy] = None,
    workers: int = 1,
    node_limit: Optional[int] = None,
    branches: Optional[Sequence[int]] = None,
    on_branch: Optional[BranchCallback] = None,
) -> EnumerationResult:
    """Depth-first enumeration of every complete tuple, split by first choice.

    The first cell's candidates partition the choice tree. Each branch is
    searched on its own grid, serially or by a pool of ``workers`` processes,
    and the counts are summed. ``node_limit`` caps the nodes of each branch;
    a capped branch makes the result incomplete. ``branches`` restricts the
    run to a subset of first-cell candidate indices. ``on_branch`` is called
    with the branch key, its count and whether it finished, as soon as each
    branch is done.

    Raises:
        EnumerationRefused: If n exceeds the desk-scale bound without
            ``allow_large``.
        InputError: If a visitor is combined with more than one worker.
    """
    count_pi(n)
    if n > MAX_SAFE_SUDOKU_ORDER and not allow_large:
        raise EnumerationRefused(
            f"enumerating all tuples of order {n} is far beyond desk scale; "
            "pass allow_large to explore it anyway"
        )
    if workers < 1:
        raise DomainError(f"workers must be positive, got {workers}")
    if visitor is not None and workers > 1:
        raise InputError("a visitor cannot be combined with parallel workers")

    strategy = replace(strategy or ChoiceStrategy(), mode=MODE_EXHAUSTIVE, seed=None)
    if branches is None:
        branches = first_cell_branches(n, strategy.pair_order)
    result = EnumerationResult(n)

    def record(branch: int, count: int, stats: SearchStats, complete: bool) -> None:
        key = str(Pair.from_index(branch, n))
        result.branch_counts[key] = count
        result.count += count
        result.stats = result.stats.merge(stats)
        if not complete:
            result.complete = False
            result.incomplete_branches.append(key)
        _LOGGER.debug("Branch %s of order %d: %d tuples", key, n, count)
        if on_branch is not None:
            on_branch(key, count, complete)

    if workers == 1:
        for branch in branches:
            record(branch, *_explore_branch(n, strategy, branch, visitor, node_limit))
    else:
        jobs = [
            (n, strategy.pair_order, strategy.cell_order, branch, node_limit)
            for branch in branches
        ]
        with multiprocessing.Pool(processes=workers) as pool:
            for outcome in pool.imap(_explore_branch_worker, jobs):
                record(*outcome)

    return result


def enumerate_tuples(
    n: int,
    visitor: Optional[Visitor] = None,
    allow_large: bool = False,
    strategy: Optional[ChoiceStrategy] = None,
    workers: int = 1,
) -> int:
    """Visit every complete n^2-tuple exactly once and return how many there were."""
    return explore_tuples(
        n, visitor, allow_large=allow_large, strategy=strategy, workers=workers
    ).count
