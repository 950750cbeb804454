"""Command-line interface: generate, count, verify and convert."""

from __future__ import annotations

import argparse
import logging
from pathlib import Path
import sys
from typing import Callable, Dict, List, Optional, Sequence

import voluptuous as vol

from .config import (
    COMMAND_CONVERT,
    COMMAND_COUNT,
    COMMAND_GENERATE,
    COMMAND_VERIFY,
    CliConfig,
    build_config,
)
from .const import (
    CELL_ORDERS,
    DOMAIN,
    EXIT_INVALID,
    EXIT_OK,
    EXIT_REFUSED,
    EXIT_USAGE,
    FORMAT_GRID,
    FORMAT_PI,
    FORMAT_SPERM,
    FORMATS,
    PAIR_ORDERS,
    QUANTITY_PI,
    STDIO_PATH,
    WHAT_MAP,
)
from .enumerator import count_pi_enumerated, count_sudoku
from .exceptions import (
    ArityError,
    BudgetExhausted,
    EnumerationRefused,
    ParseError,
    PiSudokuError,
)
from .generator import ChoiceStrategy, generate_tuple
from .pi_core import parse_pi, parse_pi_raw, validate_pi, write_pi
from .report import ValidityReport
from .sperm import (
    SPermMatrix,
    parse_sperm,
    parse_sperm_raw,
    theta,
    theta_inv,
    validate_sperm,
    write_sperm,
)
from .sudoku import (
    assemble,
    compose,
    decompose,
    parse_grids,
    parse_grids_raw,
    validate_sudoku,
    write_grid,
)

_LOGGER = logging.getLogger(__name__)


class ArgumentParser(argparse.ArgumentParser):
    """Argument parser that exits with the usage status on bad arguments."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def create_arg_parser() -> argparse.ArgumentParser:
    """Return the parser for every subcommand."""
    parser = ArgumentParser(
        prog=DOMAIN,
        description="Sudoku matrices built from disjoint Pi_n-matrices",
        allow_abbrev=False,
    )
    parser.add_argument(
        "-v", "--verbose", action="store_true", default=None, help="debug logging"
    )
    subparsers = parser.add_subparsers(
        dest="command", required=True, parser_class=ArgumentParser
    )

    parser_g = subparsers.add_parser(
        COMMAND_GENERATE, help="generate a random Sudoku matrix"
    )
    parser_g.add_argument("--n", type=int, required=True, help="block order")
    parser_g.add_argument("--seed", type=int, help="random seed (default: drawn)")
    parser_g.add_argument(
        "--max-backtracks", type=int, help="backtracks allowed per attempt"
    )
    parser_g.add_argument("--max-restarts", type=int, help="restarts allowed")
    parser_g.add_argument(
        "--cell-order", choices=CELL_ORDERS, help="cell visit order"
    )
    parser_g.add_argument("--output", help="output path, - for stdout")

    parser_c = subparsers.add_parser(COMMAND_COUNT, help="count exactly")
    parser_c.add_argument("--n", type=int, required=True, help="block order")
    parser_c.add_argument(
        "--what", choices=list(WHAT_MAP), required=True, help="what to count"
    )
    parser_c.add_argument(
        "--allow-large",
        action="store_true",
        default=None,
        help="explore orders beyond desk scale",
    )
    parser_c.add_argument("--workers", type=int, help="worker processes")
    parser_c.add_argument(
        "--pair-order", choices=PAIR_ORDERS, help="candidate order inside a cell"
    )
    parser_c.add_argument("--cell-order", choices=CELL_ORDERS, help="cell visit order")
    parser_c.add_argument("--node-limit", type=int, help="nodes allowed per branch")
    parser_c.add_argument("--checkpoint", help="JSON file of finished branches")

    parser_v = subparsers.add_parser(COMMAND_VERIFY, help="validate a file")
    parser_v.add_argument("--format", choices=FORMATS, required=True)
    parser_v.add_argument("input", nargs="?", help="input path, - for stdin")

    parser_x = subparsers.add_parser(COMMAND_CONVERT, help="convert between formats")
    parser_x.add_argument("--from", dest="from_format", choices=FORMATS, required=True)
    parser_x.add_argument("--to", dest="to_format", choices=FORMATS, required=True)
    parser_x.add_argument("input", nargs="?", help="input path, - for stdin")
    parser_x.add_argument("--output", help="output path, - for stdout")

    return parser


def _read_input(path: str) -> str:
    if path == STDIO_PATH:
        stream = getattr(sys.stdin, "buffer", None)
        if stream is None:
            return sys.stdin.read()
        raw = stream.read()
    else:
        raw = Path(path).read_bytes()
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError as err:
        line = raw.count(b"\n", 0, err.start) + 1
        raise ParseError(
            f"byte 0x{raw[err.start]:02x} is not valid UTF-8", line
        ) from err


def _write_output(path: str, text: str) -> None:
    if path == STDIO_PATH:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")


def cmd_generate(config: CliConfig) -> int:
    """Generate one Sudoku matrix and write it as a grid."""
    strategy = ChoiceStrategy.random(config.seed, cell_order=config.cell_order)
    result = generate_tuple(config.n, strategy, config.budget)
    stats = result.stats
    print(
        f"seed={config.seed} n={config.n} restarts={stats.restarts} "
        f"backtracks={stats.backtracks} nodes={stats.nodes} "
        f"status={'ok' if result.succeeded else 'exhausted'}",
        file=sys.stderr,
    )
    if not result.succeeded:
        raise BudgetExhausted(
            f"no Sudoku matrix of order {config.n} after {config.max_restarts} "
            f"restarts of {config.max_backtracks} backtracks; "
            "raise --max-backtracks or --max-restarts"
        )
    _write_output(config.output, write_grid(assemble(result.matrices)))
    return EXIT_OK


def cmd_count(config: CliConfig) -> int:
    """Count Pi matrices or Sudoku matrices and print the report."""
    if config.quantity == QUANTITY_PI:
        report = count_pi_enumerated(config.n, allow_large=config.allow_large)
    else:
        report = count_sudoku(
            config.n,
            allow_large=config.allow_large,
            pair_order=config.pair_order,
            cell_order=config.cell_order,
            workers=config.workers,
            node_limit=config.node_limit,
            checkpoint=config.checkpoint,
        )
    print(report.to_record())
    print(report.summary())
    return EXIT_OK


_VALIDATORS: Dict[str, Callable] = {
    FORMAT_GRID: lambda n, grid: validate_sudoku(grid, n),
    FORMAT_PI: lambda n, grid: validate_pi(grid),
    FORMAT_SPERM: lambda n, grid: validate_sperm(grid, n),
}

_RAW_PARSERS: Dict[str, Callable] = {
    FORMAT_GRID: parse_grids_raw,
    FORMAT_PI: parse_pi_raw,
    FORMAT_SPERM: parse_sperm_raw,
}


def cmd_verify(config: CliConfig) -> int:
    """Validate every document of a file and list violations 1-based."""
    documents = _RAW_PARSERS[config.format](_read_input(config.input))
    validate = _VALIDATORS[config.format]
    valid = True
    for number, (n, grid) in enumerate(documents, start=1):
        try:
            report: ValidityReport = validate(n, grid)
        except PiSudokuError as err:
            valid = False
            print(f"{config.format} {number}: invalid: {err}")
            continue
        if report.ok:
            print(f"{config.format} {number}: valid")
            continue
        valid = False
        print(f"{config.format} {number}: invalid")
        for line in report.lines():
            print(f"  {line}")
    return EXIT_OK if valid else EXIT_INVALID


def _load_parts(fmt: str, text: str) -> List[SPermMatrix]:
    """Read any format as a list of S-permutation matrices."""
    if fmt == FORMAT_SPERM:
        return parse_sperm(text)
    if fmt == FORMAT_PI:
        return [theta(m) for m in parse_pi(text)]
    return [part for grid in parse_grids(text) for part in decompose(grid)]


def _dump_parts(fmt: str, parts: Sequence[SPermMatrix]) -> str:
    """Write S-permutation matrices in any format."""
    if fmt == FORMAT_SPERM:
        return write_sperm(parts)
    if fmt == FORMAT_PI:
        return write_pi([theta_inv(part) for part in parts])
    size = parts[0].n * parts[0].n
    if len(parts) % size:
        raise ArityError(
            f"{len(parts)} matrices of order {parts[0].n} do not split into "
            f"grids of {size} parts"
        )
    return write_grid(
        [compose(parts[start : start + size]) for start in range(0, len(parts), size)]
    )


def cmd_convert(config: CliConfig) -> int:
    """Convert between the grid, pi and sperm formats."""
    parts = _load_parts(config.from_format, _read_input(config.input))
    _LOGGER.debug(
        "Converting %d S-permutation matrices from %s to %s",
        len(parts),
        config.from_format,
        config.to_format,
    )
    _write_output(config.output, _dump_parts(config.to_format, parts))
    return EXIT_OK


COMMANDS: Dict[str, Callable[[CliConfig], int]] = {
    COMMAND_GENERATE: cmd_generate,
    COMMAND_COUNT: cmd_count,
    COMMAND_VERIFY: cmd_verify,
    COMMAND_CONVERT: cmd_convert,
}


def _setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit status."""
    parser = create_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return int(err.code or 0)

    try:
        config = build_config(vars(args))
    except vol.Invalid as err:
        print(f"{DOMAIN}: error: {err}", file=sys.stderr)
        return EXIT_USAGE

    _setup_logging(config.verbose)
    try:
        return COMMANDS[config.command](config)
    except (BudgetExhausted, EnumerationRefused) as err:
        _LOGGER.error("%s", err)
        return EXIT_REFUSED
    except (PiSudokuError, OSError) as err:
        _LOGGER.error("%s", err)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
