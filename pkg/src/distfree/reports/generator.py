"""Plain-text reports rendered with jinja2 templates."""

from pathlib import Path
from typing import Any

from jinja2 import Environment, FileSystemLoader, StrictUndefined


class ReportGenerator:
    """Render the geometry summary and the self-test table."""

    def __init__(self, template_dir: Path | None = None) -> None:
        """Initialize report generator with template directory.

        Args:
            template_dir: Custom template directory. Defaults to package templates.
        """
        if template_dir is None:
            template_dir = Path(__file__).parent / "templates"

        self.template_dir = template_dir
        self.env = Environment(
            loader=FileSystemLoader(str(template_dir)),
            undefined=StrictUndefined,
            keep_trailing_newline=True,
            trim_blocks=True,
            lstrip_blocks=True,
        )
        self.env.filters["num"] = lambda v, digits=6: f"{float(v):.{digits}g}"

    def render_geometry(self, summary: dict[str, Any]) -> str:
        """Render FanBeamGeometry.summary() as geometry.txt."""
        return self.env.get_template("geometry.txt.j2").render(**summary)

    def render_selftest(self, checks: list[dict[str, Any]]) -> str:
        """Render the pass/fail table.

        Args:
            checks: One dict per check with name, passed, value, tolerance, detail
        """
        width = max([len("check")] + [len(c["name"]) for c in checks])
        return self.env.get_template("selftest.txt.j2").render(
            checks=checks,
            width=width,
            passed=all(c["passed"] for c in checks),
        )

    def save(self, text: str, path: Path | str) -> Path:
        """Write a rendered report to disk."""
        path = Path(path)
        path.write_text(text, encoding="utf-8", newline="\n")
        return path
