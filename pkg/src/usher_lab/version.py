"""Installed version of usher-lab and of the numerical stack it runs on."""

import importlib.metadata

from . import __version__
from .constants import APP_NAME
from .ui.styles import console, create_panel

RUNTIME_DEPENDENCIES = ("numpy", "scipy", "pydantic", "pyyaml", "click", "rich")


def _installed(distribution: str) -> str:
    try:
        return importlib.metadata.version(distribution)
    except importlib.metadata.PackageNotFoundError:
        return "not installed"


def get_version() -> str:
    """Distribution version, or the package constant in an uninstalled checkout."""
    version = _installed("usher-lab")
    return __version__ if version == "not installed" else version


def show_version_info(verbose: bool = False) -> None:
    """Print the version, and with ``verbose`` a panel of dependency versions."""
    if not verbose:
        console.print(f"{APP_NAME}, version {get_version()}")
        return

    lines = [f"[bold]{APP_NAME}[/bold] version [cyan]{get_version()}[/cyan]", ""]
    lines += [f"{name}: [dim]{_installed(name)}[/dim]" for name in RUNTIME_DEPENDENCIES]
    console.print(create_panel("\n".join(lines), title=APP_NAME))
