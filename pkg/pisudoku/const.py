"""Constants for the pisudoku package."""

from math import factorial

DOMAIN = "pisudoku"

# Text formats
FORMAT_GRID = "grid"
FORMAT_PI = "pi"
FORMAT_SPERM = "sperm"
FORMATS = (FORMAT_GRID, FORMAT_PI, FORMAT_SPERM)

# Quantities the enumerator can count
QUANTITY_PI = "pi_matrices"
QUANTITY_SUDOKU = "sudoku_matrices"

# Map CLI --what values to counted quantities
WHAT_MAP = {
    "pi": QUANTITY_PI,
    "sudoku": QUANTITY_SUDOKU,
}

# Choice strategy modes
MODE_FIRST = "first"
MODE_RANDOM = "random"
MODE_EXHAUSTIVE = "exhaustive"
MODES = (MODE_FIRST, MODE_RANDOM, MODE_EXHAUSTIVE)

# Within-cell candidate iteration orders
PAIR_ORDER_AB = "ab"  # by first component, then second
PAIR_ORDER_BA = "ba"  # by second component, then first
PAIR_ORDERS = (PAIR_ORDER_AB, PAIR_ORDER_BA)

# Cell visit orders
CELL_ORDER_NESTED = "nested"  # layer, row, column nesting
CELL_ORDER_FEWEST = "fewest"  # smallest candidate set first
CELL_ORDERS = (CELL_ORDER_NESTED, CELL_ORDER_FEWEST)

# Default values
DEFAULT_MAX_BACKTRACKS = 10_000
DEFAULT_MAX_RESTARTS = 50
DEFAULT_WORKERS = 1

# Largest orders that are counted without --allow-large
MAX_SAFE_PI_ORDER = 3
MAX_SAFE_SUDOKU_ORDER = 2

SEED_BITS = 64

# Known numbers of n^2 x n^2 Sudoku matrices
THETA_2 = 288
THETA_3 = 6_670_903_752_021_072_936_960
# Published factorisation of THETA_3
THETA_3_FACTORS = (factorial(9), 72**2, 2**7, 27_704_267_971)
REFERENCE_COUNTS = {
    1: 1,
    2: THETA_2,
    3: THETA_3,
}

# Exit statuses
EXIT_OK = 0
EXIT_INVALID = 1
EXIT_REFUSED = 2
EXIT_USAGE = 3

# Configuration keys
CONF_COMMAND = "command"
CONF_N = "n"
CONF_SEED = "seed"
CONF_FORMAT = "format"
CONF_FROM = "from_format"
CONF_TO = "to_format"
CONF_INPUT = "input"
CONF_OUTPUT = "output"
CONF_MAX_BACKTRACKS = "max_backtracks"
CONF_MAX_RESTARTS = "max_restarts"
CONF_ALLOW_LARGE = "allow_large"
CONF_WHAT = "what"
CONF_WORKERS = "workers"
CONF_PAIR_ORDER = "pair_order"
CONF_CELL_ORDER = "cell_order"
CONF_NODE_LIMIT = "node_limit"
CONF_CHECKPOINT = "checkpoint"
CONF_VERBOSE = "verbose"

# Path meaning standard input / output
STDIO_PATH = "-"
