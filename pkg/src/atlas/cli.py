"""Operator command line: ingest, serve, search, validate.

Exit codes: 0 success, 1 runtime failure, 2 usage error.  The default
provider is the offline mock; remote calls require an explicit
``--provider remote`` plus LL_API_KEY so tests never hit a paid API.
"""

from __future__ import annotations

import sys

import click

from .corpus import load_corpus, validate_corpus
from .errors import AtlasError, EmptyQuery
from .gateway import gateway_from_env
from .pipeline import run_pipeline
from .reducer import LAYOUT_BACKEND, ReducerParams


@click.group()
@click.version_option("0.1.0", prog_name="atlas")
def main():
    """Knowledge-map engine: corpus pipeline and exploration service."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path())
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--provider", type=click.Choice(["mock", "remote"]), default="mock")
@click.option("--seed", type=int, default=42)
@click.option("--n-neighbors", type=int, default=15)
@click.option("--epochs", type=int, default=None)
def ingest(input_path, fmt, out_dir, provider, seed, n_neighbors, epochs):
    """Run the pipeline: input file -> projects.json, topics.json, reducer.model."""
    gateway = gateway_from_env(provider)
    params = ReducerParams(seed=seed, n_neighbors=n_neighbors, n_epochs=epochs)
    try:
        report = run_pipeline(input_path, out_dir, gateway, params=params, fmt=fmt)
    except AtlasError as exc:
        click.echo(f"atlas ingest failed: {exc.message}", err=True)
        sys.exit(1)
    click.echo(f"layout backend: {LAYOUT_BACKEND}")
    click.echo(report.summary())


@main.command()
@click.option("--artifacts", required=True, type=click.Path())
@click.option("--port", type=int, default=8000)
@click.option("--host", default="127.0.0.1")
@click.option("--provider", type=click.Choice(["mock", "remote"]), default="mock")
@click.option("--ui-dir", type=click.Path(), default=None)
def serve(artifacts, port, host, provider, ui_dir):
    """Serve the exploration API (and the UI bundle, if built) until interrupted."""
    import uvicorn

    from .service import create_app, load_state

    try:
        state = load_state(artifacts, gateway_from_env(provider))
    except AtlasError as exc:
        click.echo(f"atlas serve failed: {exc.message}", err=True)
        sys.exit(1)
    app = create_app(state, ui_dir=ui_dir)
    try:
        uvicorn.run(app, host=host, port=port)
    except SystemExit:
        raise
    except OSError as exc:
        click.echo(f"atlas serve failed: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--artifacts", required=True, type=click.Path())
@click.option("--provider", type=click.Choice(["mock", "remote"]), default="mock")
@click.option("--k", type=int, default=10)
@click.argument("query")
def search(artifacts, provider, k, query):
    """Rank projects for QUERY; prints tab-separated `rank score id title` lines."""
    from .service import load_state

    if not query.strip():
        click.echo("atlas search: query must be nonempty", err=True)
        sys.exit(2)
    try:
        state = load_state(artifacts, gateway_from_env(provider))
        result = state.search(query, k)
    except EmptyQuery:
        sys.exit(2)
    except AtlasError as exc:
        click.echo(f"atlas search failed: {exc.message}", err=True)
        sys.exit(1)
    for rank, (pid, score) in enumerate(result.hits, start=1):
        project = state.corpus.by_id(pid)
        title = project.title if project else ""
        click.echo(f"{rank}\t{score:.6f}\t{pid}\t{title}")


@main.command()
@click.option("--artifacts", required=True, type=click.Path())
def validate(artifacts):
    """Check artifact invariants; exits 1 if any violation is found."""
    try:
        corpus = load_corpus(artifacts)
    except (OSError, ValueError) as exc:
        click.echo(f"atlas validate failed: {exc}", err=True)
        sys.exit(1)
    violations = validate_corpus(corpus)
    for v in violations:
        click.echo(str(v))
    if violations:
        sys.exit(1)
    click.echo(f"ok: {len(corpus.projects)} projects, {len(corpus.topics)} topics")


if __name__ == "__main__":
    main()
