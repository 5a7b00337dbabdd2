"""Command-line entry points."""

from __future__ import annotations

import json
import sys
import time
from importlib import resources
from pathlib import Path

import click

from bimql.agent.backends import HttpChatBackend, ScriptedBackend
from bimql.agent.loop import AgentConfig, run_agent
from bimql.app.evalrun import format_report, load_suite, load_transcripts, run_eval
from bimql.app.scene import build_scene
from bimql.errors import (
    BimqlError,
    DanglingReferenceError,
    MissingSectionError,
    NoBuildingError,
    StepSyntaxError,
)
from bimql.graph.build import DEFAULT_DOOR_EXPAND, DEFAULT_EPS, build_graph
from bimql.graph.export import FORMATS, export_graph, import_json
from bimql.ifc.extract import extract_model
from bimql.step.parser import parse_step
from bimql.store.db import build_store, open_store

EXIT_MISSING_INPUT = 1
EXIT_PARSE_FAILURE = 2
EXIT_NO_BUILDING = 3


@click.group()
def main() -> None:
    """IFC models as a relational store plus a topology graph, with a
    natural-language agent in front."""


@main.command()
@click.argument("ifc_path")
@click.option("--out-dir", "-o", default=".", help="Output directory.")
@click.option("--eps", default=DEFAULT_EPS, show_default=True,
              help="Adjacency tolerance in meters.")
@click.option("--door-expand", default=DEFAULT_DOOR_EXPAND, show_default=True,
              help="Door box expansion across the wall, meters per side.")
def ingest(ifc_path: str, out_dir: str, eps: float, door_expand: float) -> None:
    """Transform an IFC file into <name>.db, <name>.graph.json, and a report."""
    source = Path(ifc_path)
    if not source.is_file():
        click.echo(f"error: no such file: {source}", err=True)
        sys.exit(EXIT_MISSING_INPUT)
    try:
        step_file = parse_step(source.read_bytes())
    except (StepSyntaxError, MissingSectionError, DanglingReferenceError) as exc:
        click.echo(f"parse error: {exc}", err=True)
        sys.exit(EXIT_PARSE_FAILURE)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    stem = source.stem
    report_path = out / f"{stem}.report.json"

    try:
        model = extract_model(step_file)
    except NoBuildingError as exc:
        click.echo(f"error: {exc}", err=True)
        report_path.write_text(json.dumps({"source": str(source), "error": str(exc)}))
        sys.exit(EXIT_NO_BUILDING)

    db_path = out / f"{stem}.db"
    t0 = time.perf_counter()
    store = build_store(model, db_path)
    rdb_seconds = time.perf_counter() - t0

    t0 = time.perf_counter()
    graph = build_graph(
        model.navigable_elements(), model.storeys, eps=eps, x_expand=door_expand
    )
    gdb_seconds = time.perf_counter() - t0
    graph_path = out / f"{stem}.graph.json"
    graph_path.write_text(export_graph(graph, "json"))

    report = {
        "source": str(source),
        "tables": {t: store.row_count(t) for t in store.table_names()},
        "graph": {"nodes": graph.node_count(), "edges": graph.edge_count()},
        "rdb_seconds": round(rdb_seconds, 4),
        "gdb_seconds": round(gdb_seconds, 4),
        "eps": eps,
        "door_expand": door_expand,
        "warnings": model.warnings,
    }
    report_path.write_text(json.dumps(report, indent=2))
    click.echo(f"wrote {db_path}, {graph_path}, {report_path}")
    click.echo(
        f"rooms={report['tables']['room']} doors={report['tables']['door']} "
        f"stairs={report['tables']['stair']} nodes={graph.node_count()} "
        f"edges={graph.edge_count()} rdb={rdb_seconds:.3f}s gdb={gdb_seconds:.4f}s"
    )


def _load_artifacts(db: str, graph_path: str):
    store = open_store(db)
    graph = import_json(Path(graph_path).read_text())
    return store, graph


def _make_config(
    transcript: str | None,
    endpoint: str | None,
    model: str | None,
    fallback_model: str | None,
    max_iters: int,
    context_guard: int,
) -> AgentConfig:
    if transcript:
        primary = ScriptedBackend.from_file(transcript, name="scripted-primary")
        fallback = ScriptedBackend([], name="scripted-fallback")
    elif endpoint and model:
        primary = HttpChatBackend(endpoint, model)
        fallback = (
            HttpChatBackend(endpoint, fallback_model) if fallback_model else None
        )
    else:
        raise click.UsageError(
            "configure a backend: --transcript FILE or --endpoint URL --model NAME"
        )
    return AgentConfig(
        primary=primary,
        fallback=fallback,
        max_iters=max_iters,
        context_guard=context_guard,
    )


backend_options = [
    click.option("--transcript", default=None, help="Scripted backend transcript file."),
    click.option("--endpoint", default=None, help="Chat-completions endpoint URL."),
    click.option("--model", default=None, help="Model name for the HTTP backend."),
    click.option("--fallback-model", default=None, help="Fallback model name."),
    click.option("--max-iters", default=5, show_default=True),
    click.option("--context-guard", default=8000, show_default=True,
                 help="Token-estimate budget per result."),
]


def with_backend_options(command):
    for option in reversed(backend_options):
        command = option(command)
    return command


@main.command()
@click.argument("question")
@click.option("--db", required=True, help="Relational store path.")
@click.option("--graph", "graph_path", required=True, help="Graph JSON path.")
@click.option("--json", "as_json", is_flag=True, help="Emit answer plus trace as JSON.")
@with_backend_options
def query(question, db, graph_path, as_json, transcript, endpoint, model,
          fallback_model, max_iters, context_guard):
    """Answer one natural-language question."""
    store, graph = _load_artifacts(db, graph_path)
    config = _make_config(
        transcript, endpoint, model, fallback_model, max_iters, context_guard
    )
    result = run_agent(config, store, graph, question)
    if as_json:
        click.echo(
            json.dumps({"answer": result.answer, "trace": result.state.to_dict()})
        )
    else:
        click.echo(result.answer)


@main.command()
@click.option("--db", required=True)
@click.option("--graph", "graph_path", required=True)
@with_backend_options
def repl(db, graph_path, transcript, endpoint, model, fallback_model,
         max_iters, context_guard):
    """Interactive question loop (one conversation)."""
    store, graph = _load_artifacts(db, graph_path)
    config = _make_config(
        transcript, endpoint, model, fallback_model, max_iters, context_guard
    )
    history: list[dict] = []
    fallback_engaged = False
    click.echo("bimql repl; empty line exits")
    while True:
        try:
            question = click.prompt("?", default="", show_default=False)
        except (EOFError, click.Abort):
            break
        if not question.strip():
            break
        result = run_agent(
            config, store, graph, question,
            history=history, fallback_engaged=fallback_engaged,
        )
        fallback_engaged = result.state.fallback_engaged
        history.append({"role": "user", "content": question})
        history.append({"role": "assistant", "content": result.answer})
        click.echo(result.answer)


@main.command()
@click.option("--db", required=True)
@click.option("--graph", "graph_path", required=True)
@click.option("--out", "-o", default="scene.json")
@click.option("--highlight-from", default=None, help="Node ref, e.g. room:6.")
@click.option("--highlight-to", default=None, help="Node ref, e.g. room:7.")
@click.option("--meshes", is_flag=True, help="Embed full meshes.")
def render(db, graph_path, out, highlight_from, highlight_to, meshes):
    """Write a scene document for the viewer."""
    from bimql.app.service import _parse_ref

    store, graph = _load_artifacts(db, graph_path)
    highlight = None
    if highlight_from and highlight_to:
        highlight = (_parse_ref(highlight_from), _parse_ref(highlight_to))
    scene = build_scene(store, graph, highlight, include_meshes=meshes)
    Path(out).write_text(json.dumps(scene, indent=2))
    click.echo(f"wrote {out} ({len(scene['boxes'])} boxes, "
               f"{len(scene['highlights'])} highlighted)")


@main.command("export-graph")
@click.option("--graph", "graph_path", required=True)
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="cypher",
              show_default=True)
@click.option("--out", "-o", required=True)
def export_graph_cmd(graph_path, fmt, out):
    """Convert the graph JSON artifact to cypher/graphml/json."""
    graph = import_json(Path(graph_path).read_text())
    Path(out).write_text(export_graph(graph, fmt))
    click.echo(f"wrote {out}")


def _default_scenario_file(name: str) -> str:
    return str(resources.files("bimql.data").joinpath(f"scenarios/{name}"))


@main.command("eval")
@click.option("--db", required=True)
@click.option("--graph", "graph_path", required=True)
@click.option("--scenarios", default=None, help="Scenario suite JSON.")
@click.option("--bindings", default=None, help="Model bindings JSON.")
@click.option("--transcripts", default=None, help="Scripted transcripts JSON.")
@click.option("--faulty", is_flag=True,
              help="Use the fault-injected transcript variant.")
@click.option("--out-dir", "-o", default="eval-out")
@click.option("--max-iters", default=5, show_default=True)
@click.option("--context-guard", default=8000, show_default=True)
def eval_cmd(db, graph_path, scenarios, bindings, transcripts, faulty,
             out_dir, max_iters, context_guard):
    """Run the 30-scenario suite on scripted backends and report metrics."""
    store, graph = _load_artifacts(db, graph_path)
    scenarios = scenarios or _default_scenario_file("scenarios.json")
    bindings = bindings or _default_scenario_file("fzk_haus_bindings.json")
    if transcripts is None:
        transcripts = _default_scenario_file(
            "fzk_haus_transcripts_faulty.json" if faulty
            else "fzk_haus_transcripts.json"
        )
    suite = load_suite(scenarios, bindings)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = run_eval(
        suite,
        load_transcripts(transcripts),
        store,
        graph,
        out / "traces.jsonl",
        max_iters=max_iters,
        context_guard=context_guard,
    )
    (out / "report.json").write_text(json.dumps(report, indent=2))
    click.echo(format_report(report))


@main.command()
@click.option("--db", required=True)
@click.option("--graph", "graph_path", required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8080, show_default=True)
@click.option("--data-dir", default="bimql-sessions", show_default=True)
@with_backend_options
def serve(db, graph_path, host, port, data_dir, transcript, endpoint, model,
          fallback_model, max_iters, context_guard):
    """Serve the HTTP JSON API."""
    import uvicorn

    from bimql.app.service import create_app

    store, graph = _load_artifacts(db, graph_path)
    config = _make_config(
        transcript, endpoint, model, fallback_model, max_iters, context_guard
    )
    app = create_app(store, graph, config, data_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
