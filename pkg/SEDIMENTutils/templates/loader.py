"""Jinja2 loader for the report templates shipped with the package."""

from __future__ import annotations

import math
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined, TemplateNotFound

from ..exceptions import TemplateError


def format_number(value, digits: int = 4) -> str:
    """Compact number formatting for report tables; '-' for missing values."""
    if value is None or value == "":
        return "-"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, int):
        return str(value)
    try:
        number = float(value)
    except (TypeError, ValueError):
        return str(value)
    if math.isnan(number):
        return "-"
    return f"{number:.{digits}g}"


class TemplateLoader:
    """Loads templates from the package."""

    def __init__(self, template_dir: str | None = None):
        if template_dir is None:
            template_dir = str(Path(__file__).parent)
        self.env = Environment(
            loader=FileSystemLoader(template_dir),
            trim_blocks=True,
            lstrip_blocks=True,
            undefined=StrictUndefined,
        )
        self.env.filters["num"] = format_number

    def load(self, template_name: str):
        """Return a compiled template by name."""
        try:
            return self.env.get_template(template_name)
        except TemplateNotFound as exc:
            raise TemplateError(f"Template not found: {template_name}") from exc
