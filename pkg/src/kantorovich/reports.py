"""Deterministic CSV report writer: fixed column order, LF endings, stable floats."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence


def format_value(value) -> str:
    """Render a cell: floats at 17 significant digits, infinities as 'inf'."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def write_csv_report(
    path: str | Path,
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, object]],
    preamble: Sequence[str] = (),
) -> None:
    """Write rows under a fixed header, with optional '#' comment preamble."""
    lines = [f"# {line}" for line in preamble]
    lines.append(",".join(fieldnames))
    for row in rows:
        lines.append(",".join(format_value(row.get(name)) for name in fieldnames))
    Path(path).write_bytes(("\n".join(lines) + "\n").encode())
