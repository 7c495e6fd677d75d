"""Reports: one structured result object per command invocation.

A report carries the command name, a coarse status, the exit code and a
JSON-friendly payload in which every rational number is a string such
as "3/2", so serialization is exact.  Rendering the same report twice
gives identical bytes, and a rendered report parses back to an equal
report.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ParseError

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_CAP = 4
EXIT_VANISHES = 10
EXIT_UNDEFINED = 11
EXIT_PREMISE = 12
EXIT_FINDINGS = 13

STATUS_OK = "ok"
STATUS_PREMISE = "premise-failed"
STATUS_INVALID = "invalid-input"
STATUS_CAP = "cap-too-small"

_STATUSES = (STATUS_OK, STATUS_PREMISE, STATUS_INVALID, STATUS_CAP)


def frac_str(x) -> str:
    """Exact text for a rational: "3", "-1/2"."""
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def vec_strs(coords: Iterable) -> list[str]:
    return [frac_str(c) for c in coords]


def matrix_strs(mat) -> list[list[str]]:
    return [vec_strs(row) for row in mat.entries]


@dataclass
class Report:
    command: str
    status: str
    exit_code: int
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in _STATUSES:
            raise ValueError(f"unknown report status {self.status!r}")

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "status": self.status,
            "exit_code": self.exit_code,
            "payload": self.payload,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> Report:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not a structured report: {exc}")
    if not isinstance(doc, dict):
        raise ParseError("a structured report must be a JSON object")
    missing = {"command", "status", "exit_code", "payload"} - set(doc)
    if missing:
        raise ParseError(f"report misses keys: {', '.join(sorted(missing))}")
    return Report(
        command=doc["command"],
        status=doc["status"],
        exit_code=doc["exit_code"],
        payload=doc["payload"],
    )


# ---------------------------------------------------------------------------
# human rendering helpers
# ---------------------------------------------------------------------------


def format_table(rows: Sequence[Sequence[str]], header: Optional[Sequence[str]] = None) -> str:
    """Fixed-width text table; every row padded to the widest cell."""
    all_rows = ([list(header)] if header else []) + [list(r) for r in rows]
    if not all_rows:
        return ""
    ncols = max(len(r) for r in all_rows)
    for r in all_rows:
        r.extend([""] * (ncols - len(r)))
    widths = [max(len(r[i]) for r in all_rows) for i in range(ncols)]
    lines = []
    for k, r in enumerate(all_rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)).rstrip())
        if header and k == 0:
            lines.append("  ".join("-" * widths[i] for i in range(ncols)).rstrip())
    return "\n".join(lines)


def indent_block(text: str, prefix: str = "  ") -> str:
    return "\n".join(prefix + line if line else line for line in text.splitlines())
