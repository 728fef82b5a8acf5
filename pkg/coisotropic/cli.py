"""Command line: ``coiso validate|report|compare|split|decompose``."""

import asyncio
import json
import logging
import sys
from pathlib import Path

import click
from pydantic import BaseModel, TypeAdapter

from coisotropic.config import Settings, load_settings
from coisotropic.errors import ConfigError, PreconditionError, SchemaError
from coisotropic.ingredients import IngredientList, require_valid, validate as validate_list
from coisotropic.invariants import invariant_report, lists_equal, splitting
from coisotropic.logging_config import setup_logging
from coisotropic.orbitspace import PolyhedralParallelSpace, decompose as decompose_space, parallel_space_of
from coisotropic.reporting import (
    CompareModel,
    InvariantModel,
    decomposition_model,
    invariant_model,
    render_json,
    render_text,
    splitting_model,
    validation_model,
)
from coisotropic.schema import IngredientDocument, load_document, parse
from coisotropic.torus import Subtorus

logger = logging.getLogger(__name__)

EXIT_NEGATIVE = 1
EXIT_SCHEMA = 2
EXIT_PRECONDITION = 3

_FILE = click.Path(exists=True, dir_okay=False, path_type=Path)
_json_option = click.option("--json", "as_json", is_flag=True, help="Emit the machine-readable report.")


def _emit(model: BaseModel, as_json: bool) -> None:
    click.echo(render_json(model) if as_json else render_text(model), nl=False)


def _load(path: Path) -> IngredientList:
    logger.info("Reading %s", path)
    return parse(path.read_text())


def _load_complement(lst: IngredientList, spec: str) -> Subtorus | None:
    if spec == "auto":
        return None
    try:
        columns = json.loads(Path(spec).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read complement file: {exc.strerror}", field="complement") from None
    except json.JSONDecodeError as exc:
        raise SchemaError(exc.msg, field="complement", line=exc.lineno) from None
    if not isinstance(columns, list) or not all(
        isinstance(col, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in col) for col in columns
    ):
        raise SchemaError("complement must be a list of integer columns", field="complement")
    return Subtorus.span(lst.torus, columns)


# --- Commands ---


@click.group()
@click.option("--log-level", default=None, help="Overrides COISO_LOG_LEVEL.")
@click.pass_context
def cli(ctx: click.Context, log_level: str | None) -> None:
    """Exact invariants of symplectic torus actions with coisotropic principal orbits."""
    settings = load_settings()
    setup_logging(log_level or settings.log_level)
    ctx.obj = settings


@cli.command()
@click.argument("path", type=_FILE)
@_json_option
def validate(path: Path, as_json: bool) -> int:
    """Check the conditions an ingredient list must satisfy."""
    report = validate_list(_load(path))
    _emit(validation_model(report), as_json)
    return 0 if report.passed else EXIT_NEGATIVE


async def _report_all(paths: list[Path], complement: str, workers: int) -> list[InvariantModel]:
    semaphore = asyncio.Semaphore(workers)

    def build(path: Path) -> InvariantModel:
        lst = require_valid(_load(path))
        return invariant_model(str(path), invariant_report(lst, _load_complement(lst, complement)))

    async def run(path: Path) -> InvariantModel:
        async with semaphore:
            return await asyncio.to_thread(build, path)

    return list(await asyncio.gather(*(run(p) for p in paths)))


@cli.command()
@click.argument("paths", type=_FILE, nargs=-1, required=True)
@click.option("--complement", default="auto", show_default=True, help="'auto' or a JSON file of integer columns.")
@_json_option
@click.pass_obj
def report(settings: Settings, paths: tuple[Path, ...], complement: str, as_json: bool) -> int:
    """Print every invariant of one or more ingredient lists."""
    models = asyncio.run(_report_all(list(paths), complement, settings.report_workers))
    if as_json:
        if len(models) == 1:
            _emit(models[0], True)
        else:
            click.echo(TypeAdapter(list[InvariantModel]).dump_json(models, indent=2).decode())
        return 0
    click.echo("\n".join(render_text(m) for m in models), nl=False)
    return 0


@cli.command()
@click.argument("first", type=_FILE)
@click.argument("second", type=_FILE)
@_json_option
def compare(first: Path, second: Path, as_json: bool) -> int:
    """Decide whether two lists describe the same manifest data."""
    a, b = require_valid(_load(first)), require_valid(_load(second))
    equal = lists_equal(a, b)
    _emit(CompareModel(first=str(first), second=str(second), equal=equal), as_json)
    return 0 if equal else EXIT_NEGATIVE


@cli.command()
@click.argument("path", type=_FILE)
@_json_option
def split(path: Path, as_json: bool) -> int:
    """Look for a complement of the Hamiltonian torus containing c."""
    result = splitting(require_valid(_load(path)))
    _emit(splitting_model(result), as_json)
    return 0 if result.feasible else EXIT_NEGATIVE


@cli.command()
@click.argument("path", type=_FILE)
@_json_option
def decompose(path: Path, as_json: bool) -> int:
    """Split an orbit space into a polyhedron times a torus."""
    doc = load_document(path.read_text())
    if isinstance(doc, IngredientDocument):
        space = parallel_space_of(require_valid(doc.to_ingredients()))
    else:
        space = PolyhedralParallelSpace.from_document(doc)
    _emit(decomposition_model(decompose_space(space)), as_json)
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="coiso", standalone_mode=False)
    except SchemaError as exc:
        click.echo(f"schema error: {exc}", err=True)
        return EXIT_SCHEMA
    except ConfigError as exc:
        click.echo(f"configuration error: {exc}", err=True)
        return EXIT_SCHEMA
    except PreconditionError as exc:
        click.echo(f"precondition failed: {exc}", err=True)
        return EXIT_PRECONDITION
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_NEGATIVE
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
