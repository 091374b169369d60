"""Operator CLI: schema init, ETL runs, cube builds, queries, serving, and
synthetic data generation.

Exit codes: 0 success, 2 validation/user error, 3 environment or I/O
error, 4 fatal pipeline abort.
"""

from __future__ import annotations

import datetime as dt
import json
import sys
from pathlib import Path

import click

from . import errors as err
from .etl import (generate_synthetic, load_pipeline, run_pipeline)
from .cube import build_cube
from .query import bind, evaluate, format_cellset, parse
from .schema import load_catalog
from .warehouse import Warehouse

EXIT_VALIDATION = 2
EXIT_ENVIRONMENT = 3
EXIT_PIPELINE_FATAL = 4

_FATAL = (err.PipelineAbort, err.UnknownMeasureColumn, err.OrphanFactRow)
_ENVIRONMENT = (err.SourceNotFound, err.EncodingError, OSError)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except err.QuerySyntaxError:
        raise
    except _FATAL as exc:
        _fail(EXIT_PIPELINE_FATAL, str(exc))
    except _ENVIRONMENT as exc:
        _fail(EXIT_ENVIRONMENT, str(exc))
    except err.StarcubeError as exc:
        _fail(EXIT_VALIDATION, f"{exc.code}: {exc}")


@click.group()
@click.option("--data-dir", envvar="STARCUBE_DATA_DIR",
              default="./starcube-data", show_default=True,
              help="Warehouse directory (env: STARCUBE_DATA_DIR).")
@click.pass_context
def main(ctx, data_dir):
    """Embedded star-schema warehouse and OLAP engine."""
    ctx.obj = Path(data_dir)


@main.command()
@click.option("--catalog", "catalog_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Catalog document (catalog.json).")
@click.pass_obj
def init(data_dir: Path, catalog_path):
    """Create the warehouse skeleton from a catalog document."""
    def action():
        catalog = load_catalog(catalog_path)
        Warehouse.initialize(catalog, data_dir)
        click.echo(f"initialized {data_dir} with "
                   f"{len(catalog.dimensions)} dimensions, "
                   f"{len(catalog.facts)} facts, {len(catalog.cubes)} cubes")
    _guard(action)


@main.command()
@click.argument("pipeline_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--batch-id", required=True, help="Batch identifier.")
@click.option("--batch-date", default=None,
              help="SCD validity date (YYYY-MM-DD, default today).")
@click.pass_obj
def etl(data_dir: Path, pipeline_path, batch_id, batch_date):
    """Run a pipeline document as one batch."""
    def action():
        warehouse = Warehouse.load(data_dir)
        config = load_pipeline(pipeline_path)
        date = dt.date.fromisoformat(batch_date) if batch_date else None
        report = run_pipeline(config, warehouse.catalog, warehouse, batch_id,
                              batch_date=date)
        click.echo(report.format_table())
        report_path = data_dir / "reports" / f"{batch_id}.json"
        report_path.parent.mkdir(exist_ok=True)
        report_path.write_text(json.dumps(report.to_dict(), indent=2,
                                          ensure_ascii=False) + "\n",
                               encoding="utf-8")
        click.echo(f"report written to {report_path}")
    _guard(action)


@main.command()
@click.argument("cube_name", required=False)
@click.pass_obj
def build(data_dir: Path, cube_name):
    """Build a cube from the committed warehouse and print its stats."""
    def action():
        warehouse = Warehouse.load(data_dir)
        names = ([cube_name] if cube_name
                 else [c.name for c in warehouse.catalog.cubes])
        for name in names:
            cube = build_cube(warehouse.catalog, warehouse, name)
            stats = cube.stats
            click.echo(f"cube {cube.name}: {stats['fact_rows']} facts, "
                       f"{stats['base_cells']} base cells, built in "
                       f"{stats['build_ms']} ms")
            for hier, levels in sorted(stats["members"].items()):
                rendered = ", ".join(f"{lvl}={n}" for lvl, n in levels.items())
                click.echo(f"  {hier}: {rendered}")
    _guard(action)


@main.command()
@click.argument("mdx")
@click.option("--format", "fmt", default="table", show_default=True,
              type=click.Choice(["table", "csv", "json"]))
@click.pass_obj
def query(data_dir: Path, mdx, fmt):
    """Evaluate a query against the warehouse and print the cellset."""
    try:
        def action():
            ast = parse(mdx)
            warehouse = Warehouse.load(data_dir)
            cube = build_cube(warehouse.catalog, warehouse, ast.cube)
            cellset = evaluate(bind(ast, cube), cube)
            click.echo(format_cellset(cellset, fmt), nl=False)
        _guard(action)
    except err.QuerySyntaxError as exc:
        lines = mdx.splitlines() or [""]
        bad = lines[min(exc.line, len(lines)) - 1]
        click.echo(f"error: {exc}", err=True)
        click.echo(bad, err=True)
        click.echo(" " * (exc.column - 1) + "^", err=True)
        sys.exit(EXIT_VALIDATION)


@main.command()
@click.option("--port", default=8750, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--cors-origin", default="*", show_default=True)
@click.pass_obj
def serve(data_dir: Path, port, host, cors_origin):
    """Serve the query API (and the UI, when built) over HTTP."""
    import uvicorn

    from .server import EngineState, create_app

    def action():
        state = EngineState(data_dir)
        state.refresh()
        if state.loaded:
            state.build_all()
        static = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        app = create_app(state, cors_origin=cors_origin,
                         static_dir=static if static.is_dir() else None)
        uvicorn.run(app, host=host, port=port, log_level="warning")
    _guard(action)


@main.command("gen-data")
@click.option("--seed", default=42, show_default=True, type=int)
@click.option("--patients", default=500, show_default=True, type=int)
@click.option("--facts", default=5000, show_default=True, type=int)
@click.option("--typo-rate", default=0.05, show_default=True, type=float)
@click.option("--out", required=True, type=click.Path(file_okay=False))
@click.option("--with-config", is_flag=True,
              help="Also write catalog.json and pipeline.json.")
def gen_data(seed, patients, facts, typo_rate, out, with_config):
    """Generate synthetic sources plus the ground-truth manifest."""
    def action():
        try:
            manifest = generate_synthetic(seed, patients, facts, typo_rate,
                                          out, with_config=with_config)
        except ValueError as exc:
            _fail(EXIT_VALIDATION, str(exc))
        click.echo(f"wrote {manifest['facts']} facts for "
                   f"{manifest['patients']} patients to {out} "
                   f"({len(manifest['typos'])} injected typos)")
    _guard(action)


if __name__ == "__main__":
    main()
