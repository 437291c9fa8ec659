"""
Point d'entrée en ligne de commande : `achunify solve | bench | flatten`.

Codes de sortie : 0 unifiable, 1 no_solution, 2 resource_limit, 3 erreur d'entrée.
"""

import sys
from pathlib import Path

import click
from pydantic import ValidationError

from src.cli.parser import parse_problem
from src.cli.runner import (
    EXIT_CODES,
    INPUT_ERROR_EXIT,
    bench_table1,
    execute,
    render_bench,
    render_flattened,
    render_json,
    render_text,
    resolve_bound,
)
from src.config.logging import configure_logging
from src.core.exceptions import AchUnifyError, CorpusError, InputError, handle_exception
from src.core.models import ProblemFile, SolveOptions

SOFTWARE_ERROR_EXIT = 70


def _fail(exc: Exception, code: int) -> None:
    message, details = handle_exception(exc)
    click.echo(f"error: {message}", err=True)
    if details:
        click.echo(f"       {details}", err=True)
    sys.exit(code)


def _load(file: str) -> ProblemFile:
    try:
        return parse_problem(Path(file).read_bytes())
    except OSError as e:
        click.echo(f"error: lecture impossible de {file}: {e.strerror or e}", err=True)
        sys.exit(INPUT_ERROR_EXIT)
    except InputError as e:
        _fail(e, INPUT_ERROR_EXIT)


@click.group()
@click.option("--verbose", is_flag=True, help="Journalisation DEBUG sur stderr")
def cli(verbose: bool) -> None:
    """Unification ACh bornée."""
    configure_logging("DEBUG" if verbose else None)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--bound", type=int, default=None, help="Borne κ (prioritaire sur l'en-tête)")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@click.option("--check", is_flag=True, help="Vérifie chaque unificateur avant émission")
@click.option("--minimize", is_flag=True, help="Retire les unificateurs redondants")
@click.option("--max-branches", type=int, default=None, help="Branches vivantes au plus")
@click.option("--timeout-ms", type=int, default=None, help="Temps maximal en millisecondes")
@click.option("--trace", is_flag=True, help="Affiche les règles appliquées par branche (texte)")
def solve(
    file: str,
    bound: int | None,
    output_format: str,
    check: bool,
    minimize: bool,
    max_branches: int | None,
    timeout_ms: int | None,
    trace: bool,
) -> None:
    """Résout le problème de FILE."""
    problem = _load(file)
    try:
        options = SolveOptions(
            bound=bound,
            format=output_format,
            check=check,
            minimize=minimize,
            max_branches=max_branches,
            timeout_ms=timeout_ms,
            trace=trace,
        )
    except ValidationError as e:
        click.echo(f"error: options invalides: {e.errors()[0]['msg']}", err=True)
        sys.exit(INPUT_ERROR_EXIT)

    try:
        run = execute(problem, options)
    except InputError as e:
        _fail(e, INPUT_ERROR_EXIT)
    except AchUnifyError as e:
        _fail(e, SOFTWARE_ERROR_EXIT)

    if options.format == "json":
        click.echo(render_json(run.report))
    else:
        click.echo(render_text(run, trace=options.trace))
    sys.exit(EXIT_CODES[run.report.status])


@cli.command()
@click.argument("directory", type=click.Path(file_okay=False), required=False)
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
def bench(directory: str | None, output_format: str) -> None:
    """Rejoue le corpus Table 1 de DIRECTORY."""
    try:
        rows = bench_table1(Path(directory) if directory else None)
    except (CorpusError, InputError) as e:
        _fail(e, INPUT_ERROR_EXIT)
    click.echo(render_bench(rows, output_format))
    sys.exit(0 if all(row.status_match for row in rows) else 1)


@cli.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--bound", type=int, default=None, help="Borne κ (prioritaire sur l'en-tête)")
def flatten(file: str, bound: int | None) -> None:
    """Affiche le problème aplati et l'ensemble des h-profondeurs."""
    problem = _load(file)
    try:
        options = SolveOptions(bound=bound)
    except ValidationError as e:
        click.echo(f"error: options invalides: {e.errors()[0]['msg']}", err=True)
        sys.exit(INPUT_ERROR_EXIT)
    click.echo(render_flattened(problem, resolve_bound(problem, options)))


if __name__ == "__main__":
    cli()
