"""Schema-checked loading of the CSV and JSON artifacts consumed here.

The upstream solver pins one header per table kind.  Everything in this
module validates against those headers exactly; a file with the wrong
columns is rejected with a message naming the first mismatch rather than
being reinterpreted.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .errors import EmptyDataError, SchemaError

# Pinned column layouts, keyed by table kind.
SCHEMAS: dict[str, tuple[str, ...]] = {
    "spectrum": ("delta", "re_chi", "im_chi"),
    "field": ("x", "re", "im", "abs2"),
    "sweep": ("a", "delta", "x_numeric", "x_analytic", "direction"),
}

# Columns that hold free-form strings instead of numbers.
_TEXT_COLUMNS = {"direction"}

# Fields a dip summary must provide before it can be drawn.
DIP_KEYS = ("center", "fwhm", "depth", "baseline", "minimum")


def _read_header(path: Path) -> list[str]:
    if not path.is_file():
        raise SchemaError(f"input file not found: {path}")
    with path.open(newline="") as fh:
        row = next(csv.reader(fh), None)
    if row is None:
        raise SchemaError(f"{path}: file is empty, expected a header row")
    return row


def sniff_kind(path: str | Path) -> str:
    """Identify which table kind a CSV file is, from its header alone."""
    header = tuple(_read_header(Path(path)))
    for kind, columns in SCHEMAS.items():
        if header == columns:
            return kind
    raise SchemaError(
        f"{path}: header {','.join(header)!r} matches no known table "
        f"(expected one of: {', '.join(','.join(c) for c in SCHEMAS.values())})"
    )


def load_table(path: str | Path, kind: str) -> dict[str, np.ndarray | list[str]]:
    """Load a CSV file, enforcing the pinned header for ``kind``.

    Numeric columns come back as float arrays; text columns as lists of
    strings.  The special tokens ``nan`` and ``inf`` parse as the
    corresponding floats, matching how the solver writes them.
    """
    expected = SCHEMAS[kind]
    path = Path(path)
    header = _read_header(path)
    for i, want in enumerate(expected):
        got = header[i] if i < len(header) else "<missing>"
        if got != want:
            raise SchemaError(
                f"{path}: column {i + 1} is {got!r}, expected {want!r} "
                f"(full expected header: {','.join(expected)})"
            )
    if len(header) > len(expected):
        raise SchemaError(
            f"{path}: unexpected extra column {header[len(expected)]!r} "
            f"(full expected header: {','.join(expected)})"
        )

    raw: list[list[str]] = []
    with path.open(newline="") as fh:
        rows = csv.reader(fh)
        next(rows)
        for lineno, row in enumerate(rows, start=2):
            if len(row) != len(expected):
                raise SchemaError(
                    f"{path}: line {lineno} has {len(row)} fields, expected {len(expected)}"
                )
            raw.append(row)
    if not raw:
        raise EmptyDataError(f"{path}: no data rows after the header")

    table: dict[str, np.ndarray | list[str]] = {}
    for i, name in enumerate(expected):
        column = [row[i] for row in raw]
        if name in _TEXT_COLUMNS:
            table[name] = column
        else:
            try:
                table[name] = np.array([float(cell) for cell in column])
            except ValueError as exc:
                raise SchemaError(f"{path}: column {name!r}: {exc}") from None
    return table


def load_dip_summary(path: str | Path) -> dict[str, float]:
    """Load the dip-metrics JSON written alongside a spectrum."""
    path = Path(path)
    if not path.is_file():
        raise SchemaError(f"input file not found: {path}")
    try:
        payload = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: not valid JSON ({exc})") from None
    if not isinstance(payload, dict):
        raise SchemaError(f"{path}: expected a JSON object with dip metrics")
    missing = [key for key in DIP_KEYS if key not in payload]
    if missing:
        raise SchemaError(f"{path}: dip summary is missing keys: {', '.join(missing)}")
    return {key: float(payload[key]) for key in DIP_KEYS}
