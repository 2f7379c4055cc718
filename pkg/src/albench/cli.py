"""Command-line entry point for albench."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator, Sequence
from contextlib import contextmanager
from pathlib import Path
from typing import Any, TypeVar

import click
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from . import config as config_module
from .config import ConfigError, ExperimentConfig
from .datasets import INGESTERS, IngestionError, detect_format, ingest
from .harness import (
    BudgetExceeded,
    emit_results,
    grid_experiment,
    run_experiment,
    sweep_experiment,
)
from .outputs import list_outputs
from .policies import list_policies

LOGGER = logging.getLogger(__name__)

F = TypeVar("F", bound=Callable[..., Any])

EXIT_CONFIG = 2
EXIT_INGESTION = 3
EXIT_BUDGET = 4


def configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[
            RichHandler(console=Console(stderr=True), show_path=False)
        ],
        force=True,
    )


@contextmanager
def exit_codes() -> Iterator[None]:
    """Translate library failures into the documented exit codes."""

    ctx = click.get_current_context()
    try:
        yield
    except ConfigError as exc:
        LOGGER.error("Configuration error: %s", exc)
        ctx.exit(EXIT_CONFIG)
    except IngestionError as exc:
        LOGGER.error("Dataset error: %s", exc)
        ctx.exit(EXIT_INGESTION)
    except BudgetExceeded as exc:
        LOGGER.error("Refusing to start: %s", exc)
        ctx.exit(EXIT_BUDGET)


def experiment_options(func: F) -> F:
    """Options shared by every experiment subcommand."""

    options = [
        click.option(
            "-c",
            "--config",
            "config_path",
            type=click.Path(path_type=Path, dir_okay=False),
            help="Path to albench.conf (defaults to $ALBENCH_CONFIG, "
            "then ./albench.conf).",
        ),
        click.option(
            "-o",
            "--output-dir",
            type=click.Path(path_type=Path, file_okay=False),
            help="Directory for result files.",
        ),
        click.option(
            "-s",
            "--seed",
            "seeds",
            type=int,
            multiple=True,
            help="Seed override; repeat for several seeds.",
        ),
        click.option(
            "-j",
            "--workers",
            type=click.IntRange(min=1),
            help="Number of worker processes.",
        ),
        click.option(
            "--budget",
            type=click.IntRange(min=1),
            help="Maximum total number of steps the command may run.",
        ),
        click.option(
            "-p",
            "--policy",
            "policies",
            multiple=True,
            help="Policy override; repeat for several policies.",
        ),
        click.option(
            "--outputs",
            help="Comma-separated override for output modules "
            "(e.g., csv,metadata,console).",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def load_config(
    config_path: Path | None,
    output_dir: Path | None = None,
    seeds: Sequence[int] = (),
    workers: int | None = None,
    budget: int | None = None,
    policies: Sequence[str] = (),
    outputs: str | None = None,
) -> ExperimentConfig:
    """Parse the configuration and apply command-line overrides."""

    loaded = config_module.parse_config(config_path)
    if output_dir is not None:
        loaded.output_dir = output_dir
    if seeds:
        loaded.seeds = list(seeds)
    if workers is not None:
        loaded.workers = workers
    if budget is not None:
        loaded.budget = budget
    if policies:
        loaded.policy.names = list(policies)
    if outputs:
        loaded.outputs = [
            item.strip() for item in outputs.split(",") if item.strip()
        ]
    return loaded.validate()


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("-v", "--verbose", is_flag=True, help="Log debug messages.")
@click.version_option(package_name="albench", message="%(version)s")
def cli(verbose: bool) -> None:
    """Alternating Linear Bandits benchmark harness."""

    configure_logging(verbose)


@cli.command()
@experiment_options
def run(config_path: Path | None, **overrides: Any) -> int:
    """Run each configured policy once per seed."""

    with exit_codes():
        loaded = load_config(config_path, **overrides)
        report = run_experiment(loaded)
        emit_results(loaded, report)
    return 0


@cli.command()
@experiment_options
def grid(config_path: Path | None, **overrides: Any) -> int:
    """Grid search over the [grid] section for each configured policy."""

    with exit_codes():
        loaded = load_config(config_path, **overrides)
        report = grid_experiment(loaded)
        emit_results(loaded, report)
    return 0


@cli.command("rank-sweep")
@experiment_options
@click.option(
    "--ranks",
    help="Comma-separated factorization ranks (overrides [sweep] ranks).",
)
def rank_sweep(
    config_path: Path | None, ranks: str | None, **overrides: Any
) -> int:
    """Repeat the grid search for every rank."""

    with exit_codes():
        loaded = load_config(config_path, **overrides)
        if ranks:
            try:
                loaded.ranks = [int(r) for r in ranks.split(",") if r.strip()]
            except ValueError as exc:
                raise ConfigError(f"Invalid --ranks value {ranks!r}") from exc
            loaded.validate()
        report = sweep_experiment(loaded)
        emit_results(loaded, report)
    return 0


@cli.command("ingest-check")
@click.argument("path", type=click.Path(path_type=Path, dir_okay=False))
@click.option(
    "-f",
    "--format",
    "fmt",
    type=click.Choice(sorted(INGESTERS)),
    help="Dataset format (guessed from the file name when omitted).",
)
@click.option(
    "--include-implicit",
    is_flag=True,
    help="Keep Book-Crossing implicit (zero) ratings.",
)
@click.option("--max-users", type=click.IntRange(min=1))
@click.option("--max-items", type=click.IntRange(min=1))
@click.option(
    "--lenient",
    is_flag=True,
    help="Skip malformed lines instead of failing.",
)
def ingest_check(
    path: Path,
    fmt: str | None,
    include_implicit: bool,
    max_users: int | None,
    max_items: int | None,
    lenient: bool,
) -> int:
    """Parse a dataset file and print its statistics."""

    options: dict[str, Any] = {"strict": not lenient}
    if max_users is not None:
        options["max_users"] = max_users
    if max_items is not None:
        options["max_items"] = max_items

    with exit_codes():
        fmt = fmt or detect_format(path)
        if include_implicit and fmt == "bookcrossing":
            options["include_implicit"] = True
        table = ingest(path, fmt, **options)
        stats = Table(title=f"Dataset: {table.name}", show_header=False)
        stats.add_column("Field")
        stats.add_column("Value")
        for key, value in table.describe().items():
            if key == "density":
                value = f"{value:.6f}"
            stats.add_row(key, "-" if value is None else str(value))
        Console().print(stats)
    return 0


@cli.command("list")
def list_plugins() -> int:
    """List available policies and output modules."""

    click.echo("Available policies: " + ", ".join(list_policies()))
    click.echo("Available outputs: " + ", ".join(list_outputs()))
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    try:
        result = cli.main(
            args=list(argv) if argv is not None else None,
            prog_name="albench",
            standalone_mode=False,
        )
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
