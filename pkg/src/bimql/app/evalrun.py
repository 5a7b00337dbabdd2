"""Scenario-suite evaluation: run, persist traces, fold metrics.

The suite file carries model-independent query templates; a bindings
sidecar supplies model-specific parameters and the per-scenario oracle;
a transcripts file drives the scripted backends. The report is a pure
fold over the persisted trace lines so metrics stay auditable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from bimql.agent.backends import ScriptedBackend
from bimql.agent.grading import GradeResult, grade_attempt
from bimql.agent.loop import AgentConfig, run_agent
from bimql.graph.model import TopoGraph
from bimql.store.db import RelationalStore

CATEGORIES = ("SQL", "Graph")


@dataclass(frozen=True)
class Scenario:
    scenario_id: str
    category: str
    query_text: str
    oracle: dict


def load_suite(
    scenarios_path: str | Path, bindings_path: str | Path
) -> list[Scenario]:
    raw = json.loads(Path(scenarios_path).read_text())
    bindings = json.loads(Path(bindings_path).read_text())
    params = bindings.get("params", {})
    oracles = bindings.get("oracles", {})
    suite = []
    for item in raw["scenarios"]:
        sid = item["scenario_id"]
        if item["category"] not in CATEGORIES:
            raise ValueError(f"{sid}: bad category {item['category']!r}")
        suite.append(
            Scenario(
                scenario_id=sid,
                category=item["category"],
                query_text=item["query_template"].format(**params),
                oracle=oracles[sid],
            )
        )
    return suite


def load_transcripts(path: str | Path) -> dict[str, dict]:
    return json.loads(Path(path).read_text())


def run_eval(
    suite: list[Scenario],
    transcripts: dict[str, dict],
    store: RelationalStore,
    graph: TopoGraph,
    trace_path: str | Path,
    max_iters: int = 5,
    context_guard: int = 8000,
) -> dict:
    """Run every scenario on scripted backends and report the metrics."""
    trace_file = Path(trace_path)
    trace_file.parent.mkdir(parents=True, exist_ok=True)
    with trace_file.open("w") as sink:
        for scenario in suite:
            entry = transcripts.get(scenario.scenario_id)
            if entry is None:
                raise KeyError(f"no transcript for {scenario.scenario_id}")
            config = AgentConfig(
                primary=ScriptedBackend(entry["primary"], name="scripted-primary"),
                fallback=ScriptedBackend(
                    entry.get("fallback", []), name="scripted-fallback"
                ),
                max_iters=max_iters,
                context_guard=context_guard,
            )
            result = run_agent(config, store, graph, scenario.query_text)
            grade = grade_attempt(result.state, scenario.oracle)
            sink.write(
                json.dumps(
                    {
                        "scenario_id": scenario.scenario_id,
                        "category": scenario.category,
                        "query_text": scenario.query_text,
                        "oracle": scenario.oracle,
                        "answer": result.answer,
                        "first_attempt_correct": grade.first_attempt_correct,
                        "recovered": grade.recovered,
                        "state": result.state.to_dict(),
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    return fold_traces(trace_file)


def fold_traces(trace_path: str | Path) -> dict:
    """Recompute the metrics report from persisted trace lines."""
    per_category = {c: {"total": 0, "correct": 0} for c in CATEGORIES}
    failed: list[dict] = []
    recovered_count = 0
    total = 0
    for line in Path(trace_path).read_text().splitlines():
        trace = json.loads(line)
        total += 1
        bucket = per_category[trace["category"]]
        bucket["total"] += 1
        if trace["first_attempt_correct"]:
            bucket["correct"] += 1
        else:
            failed.append(
                {
                    "scenario_id": trace["scenario_id"],
                    "category": trace["category"],
                    "recovered": trace["recovered"],
                }
            )
            if trace["recovered"]:
                recovered_count += 1

    def accuracy(correct: int, n: int) -> float | str:
        return "n/a" if n == 0 else round(100.0 * correct / n, 1)

    overall_correct = sum(b["correct"] for b in per_category.values())
    return {
        "scenarios": total,
        "per_category": {
            c: {
                "total": b["total"],
                "correct": b["correct"],
                "first_attempt_accuracy": accuracy(b["correct"], b["total"]),
            }
            for c, b in per_category.items()
        },
        "overall": {
            "correct": overall_correct,
            "first_attempt_accuracy": accuracy(overall_correct, total),
        },
        "failed_cases": failed,
        "recovery": {
            "failed": len(failed),
            "recovered": recovered_count,
            "recovery_accuracy": accuracy(recovered_count, len(failed)),
        },
    }


def format_report(report: dict) -> str:
    lines = [
        f"scenarios: {report['scenarios']}",
        f"{'category':<10} {'total':>5} {'correct':>7} {'first-attempt':>14}",
    ]
    for category, bucket in report["per_category"].items():
        lines.append(
            f"{category:<10} {bucket['total']:>5} {bucket['correct']:>7} "
            f"{str(bucket['first_attempt_accuracy']):>13}%"
        )
    overall = report["overall"]
    lines.append(
        f"{'overall':<10} {report['scenarios']:>5} {overall['correct']:>7} "
        f"{str(overall['first_attempt_accuracy']):>13}%"
    )
    recovery = report["recovery"]
    lines.append(
        f"recovery: {recovery['recovered']}/{recovery['failed']} "
        f"({recovery['recovery_accuracy']}"
        + ("%" if recovery["recovery_accuracy"] != "n/a" else "")
        + ")"
    )
    if report["failed_cases"]:
        lines.append("failed: " + ", ".join(f["scenario_id"] for f in report["failed_cases"]))
    return "\n".join(lines)
