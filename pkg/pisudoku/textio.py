"""Shared reader and writer helpers for the line-oriented text formats.

Every format is a stream of one or more documents. A document starts with a
header line holding the order ``n`` followed by a fixed number of data lines.
Blank lines are ignored and tokens are split on any run of whitespace.
"""

from __future__ import annotations

from dataclasses import dataclass
import re
from typing import Callable, List, Sequence, Tuple

from .exceptions import ParseError

Row = Tuple[int, Tuple[str, ...]]

# Numeric tokens are plain ASCII decimal digits
DIGITS = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Document:
    """One header plus its data rows, with 1-based source line numbers."""

    n: int
    line: int
    rows: Tuple[Row, ...]


def read_documents(
    text: str, rows_for: Callable[[int], int], kind: str
) -> List[Document]:
    """Split ``text`` into documents.

    Args:
        text: The whole input stream.
        rows_for: Maps the order ``n`` to the number of data lines expected.
        kind: Name of the format, used in error messages.

    Returns:
        The documents in input order.

    Raises:
        ParseError: On a bad header, a truncated document, a missing trailing
            newline or empty input.
    """
    if text and not text.endswith("\n"):
        raise ParseError("missing trailing newline", text.count("\n") + 1)
    physical = text.split("\n")[:-1]
    last_line = max(len(physical), 1)

    numbered = [
        (line_no, tuple(line.split()))
        for line_no, line in enumerate(physical, start=1)
        if line.strip()
    ]

    documents: List[Document] = []
    pos = 0
    while pos < len(numbered):
        line_no, tokens = numbered[pos]
        n = _parse_header(tokens, line_no)
        count = rows_for(n)
        rows = tuple(numbered[pos + 1 : pos + 1 + count])
        if len(rows) < count:
            raise ParseError(
                f"unexpected end of input: {kind} of order {n} needs {count} "
                f"rows, found {len(rows)}",
                last_line,
            )
        documents.append(Document(n=n, line=line_no, rows=rows))
        pos += 1 + count

    if not documents:
        raise ParseError(f"no {kind} found", last_line)
    return documents


def _parse_header(tokens: Sequence[str], line_no: int) -> int:
    """Return the order held by a header line."""
    if len(tokens) != 1:
        raise ParseError(
            f"bad header: expected the order n, got {' '.join(tokens)!r}", line_no
        )
    if not is_decimal(tokens[0]):
        raise ParseError(f"bad header: {tokens[0]!r} is not an integer", line_no)
    n = int(tokens[0])
    if n < 1:
        raise ParseError(f"bad header: order must be positive, got {n}", line_no)
    return n


def expect_width(tokens: Sequence[str], width: int, line_no: int) -> None:
    """Raise unless a data line has exactly ``width`` tokens."""
    if len(tokens) != width:
        raise ParseError(f"expected {width} tokens, found {len(tokens)}", line_no)


def is_decimal(token: str) -> bool:
    """Return True if ``token`` is a run of ASCII digits."""
    return DIGITS.fullmatch(token) is not None


def parse_int(token: str, line_no: int) -> int:
    """Parse a base-10 integer token."""
    if not is_decimal(token):
        raise ParseError(f"{token!r} is not an integer", line_no)
    return int(token)


def join_documents(documents: Sequence[str]) -> str:
    """Join serialized documents with one blank line between them."""
    return "\n".join(documents)
