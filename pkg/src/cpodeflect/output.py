"""Deterministic CSV and JSON emission.

Every artifact must be byte-identical across reruns with the same
configuration, so floats are printed with 17 significant digits (enough to
round-trip an IEEE double exactly), column orders are pinned by the
callers, JSON keys are sorted, and nothing carries a timestamp.
"""

from __future__ import annotations

import json
import math
import os
from typing import Iterable, Sequence

__all__ = ["format_float", "write_csv", "write_json"]


def format_float(value: float) -> str:
    """Shortest exact decimal for a double, via the round-trip '%.17g' form."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return format(value, ".17g")


def _cell(value) -> str:
    if isinstance(value, str):
        if any(ch in value for ch in ",\n\r\""):
            raise ValueError(f"CSV cell {value!r} would need quoting; use plain tokens")
        return value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return format_float(value)


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    """Write header + rows with LF newlines and exact float formatting."""
    lines = [",".join(header)]
    width = len(header)
    for row in rows:
        if len(row) != width:
            raise ValueError(f"row width {len(row)} != header width {width}")
        lines.append(",".join(_cell(v) for v in row))
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return {"re": _jsonable(obj.real), "im": _jsonable(obj.imag)}
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _jsonable(obj.item())
    return obj


def write_json(path: str, payload: dict) -> None:
    """Write JSON with sorted keys; non-finite floats become string tokens."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    text = json.dumps(_jsonable(payload), sort_keys=True, indent=2, allow_nan=False)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text + "\n")
