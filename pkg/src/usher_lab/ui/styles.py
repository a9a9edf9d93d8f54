"""Console styling shared by every usher-lab command.

Training summaries, verification reports, oracle tables and error banners are
all built through the helpers below.
"""

from typing import Any, Optional, Sequence

from rich.box import HEAVY, ROUNDED, Box
from rich.console import Console
from rich.panel import Panel
from rich.style import Style
from rich.table import Table
from rich.text import Text
from rich.theme import Theme

COLORS = {
    "success": "green",
    "warning": "yellow",
    "error": "red",
    "info": "blue",
    "header": "bold cyan",
    "muted": "dim",
    "panel_border": "cyan",
    "table_border": "cyan",
}

LAB_THEME = Theme(
    {
        "header": Style(color="cyan", bold=True),
        "pass": Style(color="green"),
        "fail": Style(color="red", bold=True),
        "muted": Style(dim=True),
    }
)


def create_console(force_terminal: Optional[bool] = None, stderr: bool = False) -> Console:
    """Console using the lab theme, on stdout unless ``stderr`` is set."""
    return Console(theme=LAB_THEME, force_terminal=force_terminal, stderr=stderr)


def create_panel(
    content: Any,
    *,
    title: Optional[str] = None,
    border_style: Optional[str] = None,
    box: Box = ROUNDED,
) -> Panel:
    return Panel(
        content,
        title=title,
        border_style=border_style or COLORS["panel_border"],
        box=box,
        padding=(1, 2),
    )


def create_table(
    *,
    title: Optional[str] = None,
    columns: Sequence[str] = (),
    caption: Optional[str] = None,
) -> Table:
    """Create a result table.

    Args:
        title: Table title
        columns: Column headers added in order
        caption: Footnote shown under the table

    Returns:
        Styled Table with its columns in place
    """
    table = Table(
        title=title,
        caption=caption,
        box=ROUNDED,
        border_style=COLORS["table_border"],
        header_style="bold",
        title_style=COLORS["header"],
        caption_style=COLORS["muted"],
    )
    for column in columns:
        table.add_column(column)
    return table


_STATUSES = ("success", "warning", "error", "info")


def style_status(text: str, status: str) -> Text:
    """Colour ``text`` by status (success, warning, error, info)."""
    return Text(text, style=COLORS[status] if status in _STATUSES else "default")


def style_verdict(passed: bool) -> Text:
    """Render a PASS/FAIL verdict cell."""
    return style_status("PASS", "success") if passed else style_status("FAIL", "error")


def create_error_banner(
    title: str = "Error",
    message: str = "",
    details: Optional[dict[str, str]] = None,
    suggestions: Optional[list[str]] = None,
) -> Panel:
    """Build the panel a failing command prints before exiting.

    Args:
        title: Banner title
        message: What went wrong
        details: Extra ``key: value`` context lines
        suggestions: Next steps for the user

    Returns:
        Heavy red panel
    """
    red = COLORS["error"]
    muted = COLORS["muted"]
    lines = [f"[{red} bold]{title}[/{red} bold]"]
    if message:
        lines += ["", message]
    if details:
        lines.append("")
        lines += [f"[{muted}]{key}:[/{muted}] {value}" for key, value in details.items()]
    if suggestions:
        lines += ["", f"[{COLORS['warning']}]Suggestions:[/{COLORS['warning']}]"]
        lines += [f"  • {suggestion}" for suggestion in suggestions]
    return create_panel("\n".join(lines), border_style=red, box=HEAVY)


console = create_console()
error_console = create_console(stderr=True)
