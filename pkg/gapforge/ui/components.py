"""
GAPFORGE UI Components

Reusable Rich components for parameter, verification and audit summaries.
"""

from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table
from rich.text import Text


# =============================================================================
# Color Scheme
# =============================================================================

COLORS = {
    "primary": "#0ea5e9",
    "secondary": "#0369a1",
    "success": "#22c55e",
    "warning": "#f59e0b",
    "error": "#dc2626",
    "info": "#94a3b8",
    "muted": "#6b7280",
    "border": "#0369a1",
}


STATUS_ICONS = {
    "pass": "✓",
    "fail": "✗",
    "skip": "–",
    "waived": "~",
}


def _status_style(status: str) -> str:
    return {
        "pass": COLORS["success"],
        "fail": COLORS["error"],
        "skip": COLORS["muted"],
        "waived": COLORS["warning"],
    }.get(status, COLORS["info"])


# =============================================================================
# Params Panel
# =============================================================================

class ParamsPanel:
    """The parameter tower as a two-column table."""

    @staticmethod
    def render(rows: Sequence[Tuple[str, Any]], title: str = "PARAMETERS") -> Panel:
        table = Table(show_header=False, border_style=COLORS["border"], padding=(0, 1))
        table.add_column("Name", style=f"bold {COLORS['muted']}")
        table.add_column("Value", style=COLORS["info"])
        for name, value in rows:
            table.add_row(name, str(value))
        return Panel(table, title=title, title_align="left", border_style=COLORS["primary"])


# =============================================================================
# Check Table
# =============================================================================

class CheckTable:
    """One row per named check with its status."""

    @staticmethod
    def render(checks: Iterable[Tuple[str, str, str]], title: str = "CHECKS", ok: Optional[bool] = None) -> Panel:
        table = Table(
            show_header=True,
            header_style=f"bold {COLORS['primary']}",
            border_style=COLORS["border"],
            padding=(0, 1),
        )
        table.add_column("", width=1)
        table.add_column("Check", style="bold")
        table.add_column("Detail", style=COLORS["muted"])

        for name, status, detail in checks:
            table.add_row(Text(STATUS_ICONS.get(status, "?"), style=_status_style(status)), name, detail)

        if ok is None:
            border = COLORS["primary"]
        else:
            border = COLORS["success"] if ok else COLORS["error"]
        return Panel(table, title=title, title_align="left", border_style=border)


# =============================================================================
# Audit Panel
# =============================================================================

class AuditPanel:
    """Key/value summary of an audit, verdict in the title."""

    @staticmethod
    def render(name: str, values: Dict[str, Any], ok: Optional[bool] = None) -> Panel:
        content = Text()
        items = list(values.items())
        for i, (key, value) in enumerate(items):
            branch = "└─ " if i == len(items) - 1 else "├─ "
            content.append(branch, style=COLORS["muted"])
            content.append(f"{key}: ", style="bold")
            content.append(f"{value}\n" if i < len(items) - 1 else f"{value}", style=COLORS["info"])

        if ok is None:
            title, border = name.upper(), COLORS["primary"]
        elif ok:
            title, border = f"✓ {name.upper()}", COLORS["success"]
        else:
            title, border = f"✗ {name.upper()}", COLORS["error"]
        return Panel(content, title=title, title_align="left", border_style=border, padding=(0, 1))


# =============================================================================
# Error Panel
# =============================================================================

class ErrorPanel:
    """Panel for displaying errors."""

    @staticmethod
    def render(message: str, title: str = "Error", suggestion: Optional[str] = None) -> Panel:
        content = Text()
        content.append(message, style="bold")

        if suggestion:
            content.append("\n\n💡 ", style="bold")
            content.append(suggestion, style=COLORS["muted"])

        return Panel(
            content,
            title=f"❌ {title}",
            title_align="left",
            border_style=COLORS["error"],
            padding=(0, 1),
        )


# =============================================================================
# Loading Spinner
# =============================================================================

class LoadingSpinner:
    """Transient spinner shown while a long search runs."""

    def __init__(self, message: str = "Working...", console=None):
        self.message = message
        self.progress = Progress(
            SpinnerColumn("dots"),
            TextColumn(f"[bold {COLORS['primary']}]{{task.description}}"),
            transient=True,
            console=console,
        )
        self._task_id = None

    def __enter__(self):
        self.start()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.stop()

    def start(self):
        self.progress.start()
        self._task_id = self.progress.add_task(self.message)

    def stop(self):
        if self._task_id is not None:
            self.progress.remove_task(self._task_id)
        self.progress.stop()
