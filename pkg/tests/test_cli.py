from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from bimql.app.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def ingested(tmp_path_factory, request):
    fixture = request.config.rootpath / "tests" / "fixtures" / "fzk_haus.ifc"
    out = tmp_path_factory.mktemp("ingested")
    result = CliRunner().invoke(main, ["ingest", str(fixture), "-o", str(out)])
    assert result.exit_code == 0, result.output
    return out


def test_ingest_outputs_and_report(ingested):
    report = json.loads((ingested / "fzk_haus.report.json").read_text())
    assert report["tables"]["storey"] == 2
    assert report["tables"]["room"] == 7
    assert report["tables"]["door"] == 5
    assert report["tables"]["stair"] == 1
    assert report["graph"] == {"nodes": 13, "edges": 13}
    assert report["gdb_seconds"] < report["rdb_seconds"]
    assert (ingested / "fzk_haus.db").exists()
    assert (ingested / "fzk_haus.graph.json").exists()


def test_ingest_missing_file_exit_1(runner, tmp_path):
    result = runner.invoke(main, ["ingest", str(tmp_path / "nope.ifc"), "-o", str(tmp_path)])
    assert result.exit_code == 1
    assert not list(tmp_path.glob("*.db"))


def test_ingest_parse_failure_exit_2(runner, tmp_path):
    bad = tmp_path / "bad.ifc"
    bad.write_text("ISO-10303-21;\nHEADER;\nGARBAGE")
    result = runner.invoke(main, ["ingest", str(bad), "-o", str(tmp_path)])
    assert result.exit_code == 2


def test_ingest_no_building_exit_3(runner, tmp_path):
    from .test_step_parser import wrap

    source = tmp_path / "nb.ifc"
    source.write_text(wrap("#1=IFCWALL('0000000000000000000abc',$,'W',$,$,$,$,$,$);"))
    result = runner.invoke(main, ["ingest", str(source), "-o", str(tmp_path)])
    assert result.exit_code == 3
    assert (tmp_path / "nb.report.json").exists()  # partial report still written


def test_query_json_trace(runner, ingested, tmp_path):
    transcript = tmp_path / "t.json"
    transcript.write_text(json.dumps([
        "SQL_NEEDED: SELECT COUNT(*) FROM room;",
        "ANALYSIS_COMPLETE",
        "There are 7 rooms.",
    ]))
    result = runner.invoke(main, [
        "query", "How many rooms?",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
        "--transcript", str(transcript),
        "--json",
    ])
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["answer"] == "There are 7 rooms."
    assert payload["trace"]["results"][0]["rows"] == [[7]]


def test_query_requires_backend(runner, ingested):
    result = runner.invoke(main, [
        "query", "hi",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
    ])
    assert result.exit_code != 0
    assert "configure a backend" in result.output


def test_render_scene(runner, ingested, tmp_path):
    out = tmp_path / "scene.json"
    result = runner.invoke(main, [
        "render",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
        "-o", str(out),
        "--highlight-from", "room:6",
        "--highlight-to", "room:7",
    ])
    assert result.exit_code == 0, result.output
    scene = json.loads(out.read_text())
    assert len(scene["boxes"]) == 13
    assert len(scene["highlights"]) == 4


def test_render_no_highlight(runner, ingested, tmp_path):
    out = tmp_path / "scene.json"
    result = runner.invoke(main, [
        "render",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
        "-o", str(out),
    ])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["highlights"] == []


def test_export_graph_formats(runner, ingested, tmp_path):
    for fmt, needle in (
        ("cypher", "CONNECTS"),
        ("graphml", "graphml"),
        ("json", '"nodes"'),
    ):
        out = tmp_path / f"g.{fmt}"
        result = runner.invoke(main, [
            "export-graph",
            "--graph", str(ingested / "fzk_haus.graph.json"),
            "--format", fmt,
            "-o", str(out),
        ])
        assert result.exit_code == 0, result.output
        assert needle in out.read_text()


def test_eval_cli_smoke(runner, ingested, tmp_path):
    out = tmp_path / "eval"
    result = runner.invoke(main, [
        "eval",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
        "-o", str(out),
    ])
    assert result.exit_code == 0, result.output
    report = json.loads((out / "report.json").read_text())
    assert report["scenarios"] == 30
    assert report["overall"]["first_attempt_accuracy"] == 100.0
    assert "100.0%" in result.output


def test_repl_two_questions(runner, ingested, tmp_path):
    transcript = tmp_path / "repl.json"
    transcript.write_text(json.dumps([
        "SQL_NEEDED: SELECT COUNT(*) FROM room;",
        "ANALYSIS_COMPLETE",
        "7 rooms.",
        "SQL_NEEDED: SELECT COUNT(*) FROM door;",
        "ANALYSIS_COMPLETE",
        "5 doors.",
    ]))
    result = runner.invoke(main, [
        "repl",
        "--db", str(ingested / "fzk_haus.db"),
        "--graph", str(ingested / "fzk_haus.graph.json"),
        "--transcript", str(transcript),
    ], input="How many rooms?\nHow many doors?\n\n")
    assert result.exit_code == 0, result.output
    assert "7 rooms." in result.output
    assert "5 doors." in result.output
