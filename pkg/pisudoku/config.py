"""Validated configuration for the command-line surface."""

from __future__ import annotations

from dataclasses import dataclass, fields
import logging
import secrets
from typing import Any, Dict, Optional

import voluptuous as vol

from .const import (
    CELL_ORDER_NESTED,
    CELL_ORDERS,
    CONF_ALLOW_LARGE,
    CONF_CELL_ORDER,
    CONF_CHECKPOINT,
    CONF_COMMAND,
    CONF_FORMAT,
    CONF_FROM,
    CONF_INPUT,
    CONF_MAX_BACKTRACKS,
    CONF_MAX_RESTARTS,
    CONF_N,
    CONF_NODE_LIMIT,
    CONF_OUTPUT,
    CONF_PAIR_ORDER,
    CONF_SEED,
    CONF_TO,
    CONF_VERBOSE,
    CONF_WHAT,
    CONF_WORKERS,
    DEFAULT_MAX_BACKTRACKS,
    DEFAULT_MAX_RESTARTS,
    DEFAULT_WORKERS,
    FORMATS,
    PAIR_ORDER_AB,
    PAIR_ORDERS,
    SEED_BITS,
    STDIO_PATH,
    WHAT_MAP,
)
from .generator import GenerationBudget

_LOGGER = logging.getLogger(__name__)

COMMAND_GENERATE = "generate"
COMMAND_COUNT = "count"
COMMAND_VERIFY = "verify"
COMMAND_CONVERT = "convert"

POSITIVE_INT = vol.All(vol.Coerce(int), vol.Range(min=1))
SEED = vol.All(vol.Coerce(int), vol.Range(min=0, max=(1 << SEED_BITS) - 1))

BUDGET_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_MAX_BACKTRACKS, default=DEFAULT_MAX_BACKTRACKS): POSITIVE_INT,
        vol.Optional(CONF_MAX_RESTARTS, default=DEFAULT_MAX_RESTARTS): POSITIVE_INT,
    }
)

_COMMON = {
    vol.Optional(CONF_VERBOSE, default=False): bool,
}

GENERATE_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): COMMAND_GENERATE,
        vol.Required(CONF_N): POSITIVE_INT,
        vol.Optional(CONF_SEED): SEED,
        vol.Optional(CONF_CELL_ORDER, default=CELL_ORDER_NESTED): vol.In(CELL_ORDERS),
        vol.Optional(CONF_OUTPUT, default=STDIO_PATH): str,
        **_COMMON,
    }
).extend(BUDGET_SCHEMA.schema)

COUNT_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): COMMAND_COUNT,
        vol.Required(CONF_N): POSITIVE_INT,
        vol.Required(CONF_WHAT): vol.In(list(WHAT_MAP)),
        vol.Optional(CONF_ALLOW_LARGE, default=False): bool,
        vol.Optional(CONF_WORKERS, default=DEFAULT_WORKERS): POSITIVE_INT,
        vol.Optional(CONF_PAIR_ORDER, default=PAIR_ORDER_AB): vol.In(PAIR_ORDERS),
        vol.Optional(CONF_CELL_ORDER, default=CELL_ORDER_NESTED): vol.In(CELL_ORDERS),
        vol.Optional(CONF_NODE_LIMIT): POSITIVE_INT,
        vol.Optional(CONF_CHECKPOINT): str,
        **_COMMON,
    }
)

VERIFY_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): COMMAND_VERIFY,
        vol.Required(CONF_FORMAT): vol.In(FORMATS),
        vol.Optional(CONF_INPUT, default=STDIO_PATH): str,
        **_COMMON,
    }
)

CONVERT_SCHEMA = vol.Schema(
    {
        vol.Required(CONF_COMMAND): COMMAND_CONVERT,
        vol.Required(CONF_FROM): vol.In(FORMATS),
        vol.Required(CONF_TO): vol.In(FORMATS),
        vol.Optional(CONF_INPUT, default=STDIO_PATH): str,
        vol.Optional(CONF_OUTPUT, default=STDIO_PATH): str,
        **_COMMON,
    }
)

COMMAND_SCHEMAS = {
    COMMAND_GENERATE: GENERATE_SCHEMA,
    COMMAND_COUNT: COUNT_SCHEMA,
    COMMAND_VERIFY: VERIFY_SCHEMA,
    COMMAND_CONVERT: CONVERT_SCHEMA,
}


@dataclass(frozen=True)
class CliConfig:
    """One validated command invocation."""

    command: str
    n: Optional[int] = None
    seed: Optional[int] = None
    seed_drawn: bool = False
    format: Optional[str] = None
    from_format: Optional[str] = None
    to_format: Optional[str] = None
    input: str = STDIO_PATH
    output: str = STDIO_PATH
    max_backtracks: int = DEFAULT_MAX_BACKTRACKS
    max_restarts: int = DEFAULT_MAX_RESTARTS
    allow_large: bool = False
    what: Optional[str] = None
    workers: int = DEFAULT_WORKERS
    pair_order: str = PAIR_ORDER_AB
    cell_order: str = CELL_ORDER_NESTED
    node_limit: Optional[int] = None
    checkpoint: Optional[str] = None
    verbose: bool = False

    @property
    def budget(self) -> GenerationBudget:
        """Return the generation budget."""
        return GenerationBudget(self.max_backtracks, self.max_restarts)

    @property
    def quantity(self) -> Optional[str]:
        """Return the counted quantity selected by ``what``."""
        return WHAT_MAP.get(self.what) if self.what else None


def draw_seed() -> int:
    """Return a fresh seed from system entropy."""
    return secrets.randbits(SEED_BITS)


def build_config(raw: Dict[str, Any]) -> CliConfig:
    """Validate raw option values and return the command configuration.

    Keys whose value is None are treated as absent so that schema defaults
    apply.

    Raises:
        vol.Invalid: If the command is unknown or a value is out of range.
    """
    data = {key: value for key, value in raw.items() if value is not None}
    command = data.get(CONF_COMMAND)
    schema = COMMAND_SCHEMAS.get(command)
    if schema is None:
        raise vol.Invalid(f"unknown command {command!r}", path=[CONF_COMMAND])

    known = {field.name for field in fields(CliConfig)}
    data = schema({key: value for key, value in data.items() if key in known})
    if command == COMMAND_GENERATE and CONF_SEED not in data:
        data[CONF_SEED] = draw_seed()
        data["seed_drawn"] = True
        _LOGGER.debug("Drew seed %d from system entropy", data[CONF_SEED])
    return CliConfig(**data)
