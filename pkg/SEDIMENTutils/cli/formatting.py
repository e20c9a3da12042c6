"""Shared formatting utilities for CLI output."""

import math
from typing import Any, Dict, List, Union


def format_float(value: Any, digits: int = 5) -> str:
    """Format a float value, handling NaN, inf and None."""
    if value is None:
        return ''
    try:
        if math.isnan(value):
            return 'NaN'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return f"{value:.{digits}g}"
    except (TypeError, ValueError):
        return str(value)


def print_table(headers: List[str], rows: List[Union[Dict, List]]) -> None:
    """Print a formatted table with proper column alignment.

    Args:
        headers: List of column header names
        rows: List of rows, either as dicts (keyed by header) or lists
    """
    if not rows:
        return

    if isinstance(rows[0], dict):
        rows = [[row.get(h, '') for h in headers] for row in rows]

    widths = [len(str(h)) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))

    print("  ".join(str(h).ljust(widths[i]) for i, h in enumerate(headers)))
    print("  ".join("-" * w for w in widths))
    for row in rows:
        print("  ".join(str(cell).ljust(widths[i]) for i, cell in enumerate(row)))
