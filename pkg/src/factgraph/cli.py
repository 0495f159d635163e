"""Command-line pipeline driver.

Exit codes: 0 success, 1 operational failure (machine-readable JSON on
stderr), 2 usage error. Query-style commands offer --json output that is
byte-identical to the HTTP API payloads.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import api as api_payloads
from .bench import (
    apply_corrections,
    load_benchmark,
    load_corrections,
    render_report_table,
    run_benchmark,
)
from .clients import build_clients
from .config import client_settings_from, das_config_from, load_config
from .errors import FactGraphError
from .extract import extract_corpus
from .graph import TripleStatus
from .labels import normalize_label
from .ntriples import serialize_ntriples
from .store import ProjectStore, open_store, rebuild_store
from .validate import validate_batch


def _fail(exc: Exception) -> None:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    click.echo(json.dumps(payload), err=True)
    sys.exit(1)


def _open(ctx) -> ProjectStore:
    store = open_store(ctx.obj["project"])
    if not store.exists():
        _fail(FactGraphError(f"no project at {store.root}; run `factgraph ingest` first"))
    return store


def _clients(ctx, mode: str, fixtures: str | None, store: ProjectStore):
    config = load_config(store.root)
    client_conf = config.get("clients", {})
    mode = mode or client_conf.get("mode", "fixture")
    fixtures = fixtures or client_conf.get("fixtures")
    if fixtures and not Path(fixtures).is_absolute():
        candidate = store.root / fixtures
        if candidate.exists():
            fixtures = str(candidate)
    return build_clients(
        mode,
        fixtures_path=fixtures,
        cache_dir=store.cache_dir if mode in ("record", "replay") else None,
        settings=client_settings_from(config),
    )


mode_option = click.option(
    "--mode",
    type=click.Choice(["fixture", "record", "replay", "live"]),
    default=None,
    help="Client mode (default from config.toml, else fixture).",
)
fixtures_option = click.option("--fixtures", type=click.Path(), default=None, help="Fixture tables JSON.")
parallelism_option = click.option("--parallelism", type=int, default=1, show_default=True)


@click.group()
@click.option(
    "--project",
    type=click.Path(),
    default="./project",
    show_default=True,
    help="Project directory.",
)
@click.pass_context
def main(ctx, project):
    """Build, validate, query, and serve a knowledge graph from a text corpus."""
    ctx.ensure_object(dict)
    ctx.obj["project"] = project


@main.command()
@click.argument("corpus", type=click.Path(exists=True))
@click.pass_context
def ingest(ctx, corpus):
    """Load and register a corpus JSONL file (one page per line)."""
    store = ProjectStore(ctx.obj["project"])
    try:
        documents = store.ingest(corpus)
    except FactGraphError as exc:
        _fail(exc)
    pages = sum(len(doc.pages) for doc in documents)
    click.echo(f"ingested {len(documents)} documents, {pages} pages")


@main.command()
@click.option("--chunk-words", type=int, default=400, show_default=True)
@mode_option
@fixtures_option
@parallelism_option
@click.pass_context
def extract(ctx, chunk_words, mode, fixtures, parallelism):
    """Extract candidate triples from the ingested corpus."""
    store = _open(ctx)
    try:
        documents = store.load_documents()
        clients = _clients(ctx, mode, fixtures, store)
        result = extract_corpus(documents, clients.llm, chunk_words, parallelism)
        store.save_extraction(result)
    except FactGraphError as exc:
        _fail(exc)
    click.echo(
        f"candidates {result.candidate_count}, accepted {len(result.accepted)} "
        f"({result.merged_count} merged), rejected {len(result.rejected)}, "
        f"failed chunks {len(result.failed_chunks)}, graph triples {len(result.graph)}"
    )


@main.command()
@click.option("--n", "n_hits", type=int, default=None, help="Top search hits per triple.")
@click.option("--k", "k_pages", type=int, default=None, help="Pages judged per triple.")
@click.option("--tau", "relevance_threshold", type=float, default=None, help="Relevance threshold in [0,10].")
@click.option("--min-evidence", type=int, default=None)
@mode_option
@fixtures_option
@parallelism_option
@click.pass_context
def validate(ctx, n_hits, k_pages, relevance_threshold, min_evidence, mode, fixtures, parallelism):
    """Validate pending triples via search evidence and majority voting."""
    store = _open(ctx)
    try:
        config = das_config_from(
            load_config(store.root),
            n_hits=n_hits,
            k_pages=k_pages,
            relevance_threshold=relevance_threshold,
            min_evidence=min_evidence,
        )
        clients = _clients(ctx, mode, fixtures, store)
        pending = [t for t in store.state.graph.triples() if t.status is TripleStatus.PENDING]
        records = validate_batch(pending, config, clients, parallelism)
        store.append_validation(records)
    except FactGraphError as exc:
        _fail(exc)
    tally = {"factual": 0, "non-factual": 0, "unverifiable": 0}
    for record in records:
        tally[record.outcome.value] += 1
    click.echo(
        f"validated {len(records)} triples: {tally['factual']} factual, "
        f"{tally['non-factual']} non-factual, {tally['unverifiable']} unverifiable"
    )


@main.command("eval")
@click.argument("benchmark", type=click.Path(exists=True))
@click.option("--corrections", type=click.Path(exists=True), default=None)
@click.option("--n", "n_hits", type=int, default=None)
@click.option("--k", "k_pages", type=int, default=None)
@click.option("--tau", "relevance_threshold", type=float, default=None)
@click.option("--min-evidence", type=int, default=None)
@click.option("--out", type=click.Path(), default=None, help="Write the JSON report here.")
@click.option("--outcomes", type=click.Path(), default=None, help="Write per-triple outcomes JSONL here.")
@mode_option
@fixtures_option
@parallelism_option
@click.pass_context
def eval_command(
    ctx, benchmark, corrections, n_hits, k_pages, relevance_threshold, min_evidence,
    out, outcomes, mode, fixtures, parallelism,
):
    """Score the validation pipeline against a labeled benchmark TSV."""
    store = ProjectStore(ctx.obj["project"])
    try:
        dataset = load_benchmark(benchmark)
        if corrections:
            dataset = apply_corrections(dataset, load_corrections(corrections))
        config = das_config_from(
            load_config(store.root),
            n_hits=n_hits,
            k_pages=k_pages,
            relevance_threshold=relevance_threshold,
            min_evidence=min_evidence,
        )
        clients = _clients(ctx, mode, fixtures, store)
        report, records = run_benchmark(dataset, config, clients, parallelism)
    except FactGraphError as exc:
        _fail(exc)
    click.echo(render_report_table(report))
    if report is None:
        click.echo("all rows unverifiable; no classified items")
    else:
        click.echo(
            f"unclassified {report.unclassified_count}"
            + (f", degenerate: {', '.join(report.degenerate)}" if report.degenerate else "")
        )
    if out:
        payload = report.as_dict() if report else {"unclassified_count": len(records), "empty": True}
        Path(out).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    if outcomes:
        with open(outcomes, "w", encoding="utf-8") as handle:
            for record in records:
                handle.write(json.dumps(record.as_dict(), ensure_ascii=False) + "\n")


@main.command()
@click.option("--subject", default="")
@click.option("--predicate", default="")
@click.option("--object", "obj", default="")
@click.option("--json", "as_json", is_flag=True, help="Emit the API payload.")
@click.pass_context
def query(ctx, subject, predicate, obj, as_json):
    """Match triples by any subset of subject/predicate/object."""
    store = _open(ctx)
    if not (subject or predicate or obj):
        raise click.UsageError("provide at least one of --subject/--predicate/--object")
    try:
        payload = api_payloads.query_payload(store, subject, predicate, obj)
    except FactGraphError as exc:
        _fail(exc)
    if as_json:
        click.echo(json.dumps(payload, ensure_ascii=False))
        return
    for item in payload["items"]:
        negation = "not " if item["negated"] else ""
        click.echo(f"{item['id']}  {item['subject']} | {negation}{item['predicate']} | {item['object']}  [{item['status']}]")
    click.echo(f"{payload['total']} matching triples")


@main.command()
@click.option("--source", required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option("--direction", type=click.Choice(["out", "in", "both"]), default="both", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def khop(ctx, source, k, direction, as_json):
    """Summarize the neighborhood within k hops of an entity."""
    store = _open(ctx)
    try:
        payload = api_payloads.khop_payload(store, source, k, direction)
    except (FactGraphError, ValueError) as exc:
        _fail(exc)
    click.echo(json.dumps(payload, ensure_ascii=False) if as_json else payload["summary"])


@main.command()
@click.option("--source", required=True)
@click.option("--target", required=True)
@click.option("--max-hops", type=int, default=4, show_default=True)
@click.option("--direction", type=click.Choice(["out", "in", "both"]), default="both", show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def paths(ctx, source, target, max_hops, direction, as_json):
    """Enumerate simple paths between two entities, shortest first."""
    store = _open(ctx)
    try:
        payload = api_payloads.paths_payload(store, source, target, max_hops, direction)
    except (FactGraphError, ValueError) as exc:
        _fail(exc)
    click.echo(json.dumps(payload, ensure_ascii=False) if as_json else payload["summary"])


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def stats(ctx, as_json):
    """Graph statistics and status histogram."""
    store = _open(ctx)
    payload = api_payloads.stats_payload(store)
    if as_json:
        click.echo(json.dumps(payload, ensure_ascii=False))
        return
    click.echo(
        f"triples {payload['triple_count']}, entities {payload['unique_entity_count']}, "
        f"relations {payload['unique_relation_count']}"
    )
    for status, count in payload["status_histogram"].items():
        click.echo(f"  {status}: {count}")


@main.command()
@click.option("--entities", "entities_file", type=click.Path(exists=True), required=True,
              help="Reference entity labels, one per line.")
@click.option("--relations", "relations_file", type=click.Path(exists=True), required=True,
              help="Reference relation labels, one per line.")
@click.pass_context
def novelty(ctx, entities_file, relations_file):
    """Fractions of graph labels absent from reference label lists."""
    store = _open(ctx)

    def _load_labels(path):
        labels = set()
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if line:
                labels.add(normalize_label(line).text)
        return labels

    try:
        entity_novel, relation_novel = store.state.graph.novelty_report(
            _load_labels(entities_file), _load_labels(relations_file)
        )
    except FactGraphError as exc:
        _fail(exc)
    click.echo(f"entity_novel_fraction {entity_novel:.4f}")
    click.echo(f"relation_novel_fraction {relation_novel:.4f}")


@main.command()
@click.option("--out", type=click.Path(), required=True)
@click.option("--all", "include_all", is_flag=True, help="Export every triple, not just the published view.")
@click.pass_context
def export(ctx, out, include_all):
    """Write the N-Triples file (published view by default)."""
    store = _open(ctx)
    graph = store.state.graph if include_all else store.published_graph()
    Path(out).write_text(serialize_ntriples(graph), encoding="utf-8")
    click.echo(f"wrote {len(graph)} triples to {out}")


@main.command()
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def agreement(ctx, as_json):
    """Machine-vs-expert agreement over reviewed triples."""
    store = _open(ctx)
    payload = api_payloads.agreement_payload(store)
    if as_json:
        click.echo(json.dumps(payload, ensure_ascii=False))
        return
    if payload["agreement"] is None:
        click.echo("no reviews yet")
        return
    click.echo(
        f"agreement {payload['agreement']:.4f} ({payload['matches']}/{payload['compared']} compared, "
        f"{payload['excluded']} excluded)"
    )


@main.command()
@click.pass_context
def rebuild(ctx):
    """Refold the logs and rewrite the snapshot files."""
    try:
        store = rebuild_store(ctx.obj["project"])
    except FactGraphError as exc:
        _fail(exc)
    click.echo(f"rebuilt snapshot: {len(store.state.graph)} triples")


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--ui-dir", type=click.Path(), default=None, help="Static UI bundle to serve.")
@mode_option
@fixtures_option
@click.pass_context
def serve(ctx, port, host, ui_dir, mode, fixtures):
    """Serve the HTTP API (and optionally the UI bundle)."""
    import uvicorn

    from .api import create_app

    store = _open(ctx)
    try:
        clients = _clients(ctx, mode, fixtures, store)
    except FactGraphError as exc:
        _fail(exc)
    app = create_app(store, clients, ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
