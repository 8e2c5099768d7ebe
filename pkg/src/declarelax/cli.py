"""Batch command line: derive, relax, constraints, sql, check, serve."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import relaxation
from .checker import check_log
from .constraints import constraints_for_matrix, constraints_from_json, constraints_to_json
from .errors import DeclarelaxError
from .eventlog import parse_event_log
from .relations import RelationMatrix, derive_matrix
from .sqlgen import MODES, render_bundle
from .wfnet import DEFAULT_STATE_LIMIT, check_free_choice, check_soundness, parse_pnml


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}")


def _write(path: str | None, text: str) -> None:
    if path is None:
        click.echo(text, nl=False)
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot write {path}: {exc}")


@click.group()
def main():
    """Workflow nets to relaxable relations, Declare constraints, and SQL."""


@main.command()
@click.option("--net", "net_path", required=True, help="PNML workflow net")
@click.option("--out", "out_path", default=None, help="matrix file (stdout if omitted)")
@click.option("--state-limit", default=DEFAULT_STATE_LIMIT, show_default=True, type=int)
def derive(net_path: str, out_path: str | None, state_limit: int):
    """Derive the behavioral relation matrix from a workflow net."""
    try:
        net = parse_pnml(_read(net_path))
        if not check_free_choice(net):
            _fail("net is not free-choice")
        verdict = check_soundness(net, state_limit=state_limit)
        if not verdict.sound:
            witness = sorted(verdict.witness) if verdict.witness is not None else None
            _fail(f"net is not sound: {verdict.reason} (witness marking: {witness})")
        matrix = derive_matrix(net, verdict.graph)
    except DeclarelaxError as exc:
        _fail(str(exc))
    _write(out_path, matrix.to_json())


@main.command()
@click.option("--matrix", "matrix_path", required=True, help="input matrix file")
@click.option("--script", "script_path", required=True, help="relaxation script file")
@click.option("--out", "out_path", default=None, help="matrix file (stdout if omitted)")
def relax(matrix_path: str, script_path: str, out_path: str | None):
    """Replay a relaxation script on a matrix."""
    try:
        base = RelationMatrix.from_json(_read(matrix_path))
        script = relaxation.script_from_json(_read(script_path))
        result = relaxation.replay(base, script)
    except DeclarelaxError as exc:
        _fail(str(exc))
    _write(out_path, result.to_json())


@main.command()
@click.option("--matrix", "matrix_path", required=True, help="input matrix file")
@click.option("--out", "out_path", default=None, help="constraint file (stdout if omitted)")
def constraints(matrix_path: str, out_path: str | None):
    """Generate branched-Declare constraints from a matrix."""
    try:
        matrix = RelationMatrix.from_json(_read(matrix_path))
        generated = constraints_for_matrix(matrix)
    except DeclarelaxError as exc:
        _fail(str(exc))
    _write(out_path, constraints_to_json(generated))


@main.command()
@click.option("--constraints", "constraints_path", required=True, help="constraint file")
@click.option("--out", "out_path", default=None, help="SQL script (stdout if omitted)")
@click.option("--mode", type=click.Choice(MODES), default="paper", show_default=True)
def sql(constraints_path: str, out_path: str | None, mode: str):
    """Emit MATCH_RECOGNIZE queries for a constraint file."""
    try:
        constraint_set = constraints_from_json(_read(constraints_path))
        bundle = render_bundle(constraint_set, mode)
    except DeclarelaxError as exc:
        _fail(str(exc))
    _write(out_path, bundle.to_sql())


@main.command()
@click.option("--constraints", "constraints_path", required=True, help="constraint file")
@click.option("--log", "log_path", required=True, help="event log CSV")
@click.option("--out", "out_path", default=None, help="report file (optional)")
def check(constraints_path: str, log_path: str, out_path: str | None):
    """Check an event log and print the conformance rate."""
    try:
        constraint_set = constraints_from_json(_read(constraints_path))
        traces = parse_event_log(_read(log_path))
        report = check_log(traces, constraint_set)
    except DeclarelaxError as exc:
        _fail(str(exc))
    if out_path is not None:
        _write(out_path, report.to_json())
    click.echo(f"conformance rate: {report.conformance_rate:.3f}")


@main.command()
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
def serve(port: int, host: str):
    """Run the interactive session service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
