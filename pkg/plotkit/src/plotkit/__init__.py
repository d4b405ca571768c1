"""Figures from solver CSV artifacts: spectrum, stability map, trajectories."""

from .errors import EmptyDataError, PlotkitError, SchemaError
from .figures import KINDS, FigureSpec, build_figure, render
from .reader import SCHEMAS, load_dip_summary, load_table, sniff_kind

__version__ = "0.1.0"

__all__ = [
    "KINDS",
    "SCHEMAS",
    "FigureSpec",
    "PlotkitError",
    "SchemaError",
    "EmptyDataError",
    "build_figure",
    "render",
    "load_table",
    "load_dip_summary",
    "sniff_kind",
    "__version__",
]
