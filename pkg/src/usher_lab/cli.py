"""Main CLI entry point for usher-lab.

This module defines the click group and its subcommands. Each subcommand only
parses options and hands over to ``commands/<name>.py::run_<name>_command``.
"""

import sys
from pathlib import Path
from typing import Optional

import click

from . import __version__
from .constants import EXIT_INTERRUPTED
from .harness.config import list_bundled_configs
from .ui.styles import console
from .utils.logger import configure_file_logging, set_debug_mode


def show_examples() -> None:
    """Show usage examples."""
    console.print("[bold yellow]Examples:[/bold yellow]")
    console.print("    $ usher-lab train --config discrete            # bundled experiment")
    console.print("    $ usher-lab train -c discrete -c discrete_her --seeds 0-4 --workers 4")
    console.print("    $ usher-lab verify --out reports/")
    console.print("    $ usher-lab oracle --config discrete --out oracle/")
    console.print("    $ usher-lab compare runs/discrete/*.csv --out discrete_long.csv")
    console.print()
    console.print(f"[dim]Bundled experiments: {', '.join(list_bundled_configs())}[/dim]")


@click.group(invoke_without_command=True)
@click.version_option(version=__version__, prog_name="usher-lab")
@click.option("--debug", is_flag=True, help="Enable debug output")
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Also write every log record to this file",
)
@click.pass_context
def cli(ctx: click.Context, debug: bool, log_file: Optional[Path]) -> None:
    """Tabular multi-goal RL lab: HER, its importance-sampling correction and exact oracles."""
    ctx.ensure_object(dict)
    ctx.obj["debug"] = debug
    set_debug_mode(debug)
    if log_file is not None:
        configure_file_logging(log_file)

    if ctx.invoked_subcommand is None:
        console.print("[bold cyan]usher-lab[/bold cyan]")
        console.print(f"[dim]{cli.help}[/dim]\n")
        show_examples()


@cli.command()
@click.option(
    "-c",
    "--config",
    "config_refs",
    multiple=True,
    required=True,
    help="Experiment YAML file or bundled config name (repeatable)",
)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Override train.seed")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Override output.directory",
)
@click.option("--seeds", help="Run several seeds, e.g. '0-4' or '0,3,7'")
@click.option(
    "-w",
    "--workers",
    type=click.IntRange(min=1),
    default=1,
    show_default=True,
    help="Worker processes for --seeds",
)
def train(
    config_refs: tuple[str, ...],
    seed: Optional[int],
    out_dir: Optional[Path],
    seeds: Optional[str],
    workers: int,
) -> None:
    """Train agents and write one metrics CSV per run."""
    from .commands.train import run_train_command

    run_train_command(
        config_refs=config_refs,
        seed=seed,
        out_dir=out_dir,
        seeds=seeds,
        workers=workers,
    )


@cli.command()
@click.option(
    "-c",
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="YAML file with suite sample sizes",
)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), help="Override the suite seed")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Write verification.txt here",
)
def verify(config_path: Optional[Path], seed: Optional[int], out_dir: Optional[Path]) -> None:
    """Run every oracle check; exits 2 if any fails."""
    from .commands.verify import run_verify_command

    run_verify_command(config_path=config_path, seed=seed, out_dir=out_dir)


@cli.command()
@click.option(
    "-c",
    "--config",
    "config_ref",
    required=True,
    help="Experiment YAML file or bundled config name",
)
@click.option("-g", "--goal", type=click.IntRange(min=0), help="Solve a single goal")
@click.option(
    "--out",
    "out_dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory for qstar.npz and fstar_g<g>.npz",
)
def oracle(config_ref: str, goal: Optional[int], out_dir: Optional[Path]) -> None:
    """Dump exact Q* and successor-density tables."""
    from .commands.oracle import run_oracle_command

    run_oracle_command(config_ref=config_ref, goal=goal, out_dir=out_dir)


@cli.command()
@click.argument(
    "paths",
    nargs=-1,
    required=True,
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
@click.option(
    "--out",
    "out_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the long-format CSV here instead of stdout",
)
def compare(paths: tuple[Path, ...], out_path: Optional[Path]) -> None:
    """Join metrics CSVs into one long-format CSV."""
    from .commands.compare import run_compare_command

    run_compare_command(paths=paths, out_path=out_path)


@cli.command()
def version() -> None:
    """Show the installed version and the versions of its dependencies."""
    from .version import show_version_info

    show_version_info(verbose=True)


def main() -> None:
    """Main entry point for the CLI application."""
    try:
        cli()
    except KeyboardInterrupt:
        console.print("\n[yellow]Operation cancelled by user[/yellow]")
        sys.exit(EXIT_INTERRUPTED)


if __name__ == "__main__":
    main()
