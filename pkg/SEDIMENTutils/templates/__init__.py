"""Markdown report templates."""

from .loader import TemplateLoader, format_number
from .renderer import TemplateRenderer

__all__ = ["TemplateLoader", "TemplateRenderer", "format_number"]
