"""Template renderer."""

from __future__ import annotations

from pathlib import Path
from typing import Dict

from jinja2 import TemplateError as JinjaTemplateError

from ..exceptions import ReportIOError, TemplateError
from .loader import TemplateLoader


class TemplateRenderer:
    """Render report templates to strings or files."""

    def __init__(self, loader: TemplateLoader | None = None):
        self.loader = loader or TemplateLoader()

    def render(self, template_name: str, context: Dict) -> str:
        template = self.loader.load(template_name)
        try:
            return template.render(**context)
        except JinjaTemplateError as exc:
            raise TemplateError(f"{template_name}: {exc}") from exc

    def render_to_file(self, template_name: str, context: Dict, path) -> Path:
        text = self.render(template_name, context)
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
        except OSError as exc:
            raise ReportIOError(path, exc.strerror or str(exc)) from exc
        return path
