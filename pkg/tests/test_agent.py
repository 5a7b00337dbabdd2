from __future__ import annotations

import json

import pytest

from bimql.agent.backends import ScriptedBackend
from bimql.agent.decision import parse_decision, split_top_level
from bimql.agent.grading import grade_attempt, oracle_matches
from bimql.agent.loop import AgentConfig, AgentState, StoreEntry, run_agent
from bimql.agent.prompts import render_system_prompt
from bimql.errors import TranscriptExhaustedError

OVERSIZED_SQL = (
    "SQL_NEEDED: SELECT p.element_id, p.property_name, p.property_value, "
    "g.vertices, g.faces FROM property p JOIN real_geometry g "
    "ON g.element_id = p.element_id;"
)
OVERSIZED_MORE = OVERSIZED_SQL.replace("SQL_NEEDED:", "MORE_SQL_NEEDED:")


class TestParseDecision:
    def test_single_sql(self):
        decision = parse_decision(
            "SQL_NEEDED: SELECT COUNT(*) FROM room;", "initial"
        )
        assert decision.sql_queries == ["SELECT COUNT(*) FROM room"]
        assert not decision.direct_answer

    def test_multiple_statements_split_on_top_level_semicolons(self):
        decision = parse_decision(
            "SQL_NEEDED: SELECT name FROM door WHERE name = 'a;b'; "
            "SELECT COUNT(*) FROM room",
            "initial",
        )
        assert decision.sql_queries == [
            "SELECT name FROM door WHERE name = 'a;b'",
            "SELECT COUNT(*) FROM room",
        ]

    def test_both_markers_one_line(self):
        decision = parse_decision(
            'MORE_SQL_NEEDED: SELECT name FROM storey; '
            'MORE_GRAPH_NEEDED: {"count": {"type": "door"}}',
            "loop",
        )
        assert decision.sql_queries == ["SELECT name FROM storey"]
        assert len(decision.graph_queries) == 1
        assert decision.graph_queries[0][1].command == "count"

    def test_analysis_complete(self):
        assert parse_decision("ANALYSIS_COMPLETE", "loop").complete
        assert parse_decision("  ANALYSIS_COMPLETE  ", "loop").complete

    def test_initial_without_marker_is_direct_answer(self):
        decision = parse_decision("The building is FZK-Haus.", "initial")
        assert decision.direct_answer
        assert decision.draft == "The building is FZK-Haus."

    def test_loop_without_marker_is_neither_complete_nor_query(self):
        decision = parse_decision("hmm, let me think", "loop")
        assert not decision.complete
        assert not decision.has_queries()

    def test_markers_are_case_sensitive_and_phase_scoped(self):
        assert parse_decision("sql_needed: SELECT 1;", "initial").direct_answer
        assert parse_decision(
            "MORE_SQL_NEEDED: SELECT 1;", "initial"
        ).direct_answer

    def test_malformed_graph_query_collected(self):
        decision = parse_decision("GRAPH_NEEDED: {broken json", "initial")
        assert decision.malformed
        assert not decision.graph_queries

    def test_graph_json_with_semicolon_in_string(self):
        decision = parse_decision(
            'GRAPH_NEEDED: {"neighbors": {"node": {"type": "room", '
            '"name": "a;b"}}}',
            "initial",
        )
        assert len(decision.graph_queries) == 1

    def test_split_top_level_respects_quotes(self):
        assert split_top_level("a;'x;y';b") == ["a", "'x;y'", "b"]
        assert split_top_level('{"k": "v;w"}; next') == ['{"k": "v;w"}', " next"]


def test_scripted_backend_exhaustion():
    backend = ScriptedBackend(["only"])
    assert backend.complete([]) == "only"
    with pytest.raises(TranscriptExhaustedError):
        backend.complete([])


def test_system_prompt_contents(fzk_store, fzk_graph):
    from bimql.graph.build import summarize_graph

    prompt = render_system_prompt(
        fzk_store.element_types_present(),
        summarize_graph(fzk_graph),
        fzk_store.property_names(),
        "How many rooms?",
    )
    assert "SQL must be SELECT-only" in prompt
    assert "door" in prompt
    assert "How many rooms?" in prompt
    assert "{element_types}" not in prompt


def test_system_prompt_empty_store(tmp_path):
    from bimql.store.db import build_store

    from .test_store import minimal_model

    store = build_store(minimal_model(), tmp_path / "empty.db")
    prompt = render_system_prompt(
        store.element_types_present(), "(empty)", store.property_names(), "hi"
    )
    assert "AVAILABLE ELEMENT TYPES IN DATABASE: (none)" in prompt


def test_prompt_truncates_property_names(fzk_store, fzk_graph):
    names = [f"p{i:03d}" for i in range(150)]
    prompt = render_system_prompt(["room"], "g", names, "q")
    assert "p099" in prompt and "p100" not in prompt


# --- loop mechanics ---------------------------------------------------------


def run(transcript, fzk_store, fzk_graph, fallback=None, query="How many rooms?",
        **kwargs):
    config = AgentConfig(
        primary=ScriptedBackend(transcript, name="scripted-primary"),
        fallback=ScriptedBackend(fallback or [], name="scripted-fallback"),
        **kwargs,
    )
    return run_agent(config, fzk_store, fzk_graph, query)


def test_three_call_happy_path(fzk_store, fzk_graph):
    result = run(
        [
            "SQL_NEEDED: SELECT COUNT(*) FROM room;",
            "ANALYSIS_COMPLETE",
            "The building has 7 rooms.",
        ],
        fzk_store,
        fzk_graph,
    )
    assert "7" in result.answer
    assert len(result.state.calls) == 3
    assert result.state.results[0].rows == [[7]]
    assert not result.state.incomplete


def test_direct_answer_two_calls(fzk_store, fzk_graph):
    result = run(
        ["It is a residential building.", "It is a residential building."],
        fzk_store,
        fzk_graph,
    )
    assert len(result.state.calls) == 2  # decision + final, no execution
    assert result.state.results == []
    assert not result.state.incomplete


def test_iteration_cap_and_call_bound(fzk_store, fzk_graph):
    never_done = ["SQL_NEEDED: SELECT COUNT(*) FROM room;"] + [
        "MORE_SQL_NEEDED: SELECT COUNT(*) FROM door;" for _ in range(10)
    ] + ["gave up answer"]
    result = run(never_done, fzk_store, fzk_graph, max_iters=5)
    assert result.state.incomplete
    assert result.state.iterations == 5
    assert len(result.state.calls) <= 5 + 3


def test_failed_sql_recorded_and_loop_continues(fzk_store, fzk_graph):
    result = run(
        [
            "SQL_NEEDED: SELECT nope FROM missing_table;",
            "MORE_SQL_NEEDED: SELECT COUNT(*) FROM room;",
            "ANALYSIS_COMPLETE",
            "7 rooms.",
        ],
        fzk_store,
        fzk_graph,
    )
    first, second = result.state.results
    assert first.error is not None
    assert second.rows == [[7]]
    assert not result.state.incomplete


def test_malformed_graph_query_becomes_error_entry(fzk_store, fzk_graph):
    result = run(
        [
            "GRAPH_NEEDED: {broken",
            "ANALYSIS_COMPLETE",
            "done",
        ],
        fzk_store,
        fzk_graph,
    )
    assert result.state.results[0].error.startswith("malformed graph query")


def test_guard_trip_then_fallback(fzk_store, fzk_graph):
    result = run(
        [OVERSIZED_SQL, OVERSIZED_MORE],
        fzk_store,
        fzk_graph,
        fallback=[
            "MORE_SQL_NEEDED: SELECT DISTINCT property_name FROM property "
            "WHERE element_type = 'IfcWall';",
            "ANALYSIS_COMPLETE",
            "Walls carry IsExternal, LoadBearing, ThermalTransmittance.",
        ],
    )
    state = result.state
    assert len(state.guard_events) == 2
    assert state.fallback_engaged
    assert state.results[0].guard_notice is not None
    assert state.results[0].rows is None
    assert [c["backend"] for c in state.calls][:2] == [
        "scripted-primary", "scripted-primary",
    ]
    assert state.calls[2]["backend"] == "scripted-fallback"
    assert len(state.calls) <= 5 + 3
    grade = grade_attempt(
        state,
        {"kind": "set", "column": 0,
         "values": ["IsExternal", "LoadBearing", "ThermalTransmittance"]},
    )
    assert not grade.first_attempt_correct
    assert grade.recovered


def test_single_guard_trip_recovers_on_primary(fzk_store, fzk_graph):
    result = run(
        [
            OVERSIZED_SQL,
            "MORE_SQL_NEEDED: SELECT COUNT(*) FROM room;",
            "ANALYSIS_COMPLETE",
            "7 rooms.",
        ],
        fzk_store,
        fzk_graph,
    )
    state = result.state
    assert len(state.guard_events) == 1
    assert not state.fallback_engaged
    assert grade_attempt(state, {"kind": "scalar", "value": 7}).first_attempt_correct


def test_append_only_store(fzk_store, fzk_graph):
    result = run(
        [
            "SQL_NEEDED: SELECT COUNT(*) FROM room;",
            "MORE_SQL_NEEDED: SELECT COUNT(*) FROM door;",
            "ANALYSIS_COMPLETE",
            "done",
        ],
        fzk_store,
        fzk_graph,
    )
    queries = [e.query for e in result.state.results]
    assert queries == [
        "SELECT COUNT(*) FROM room", "SELECT COUNT(*) FROM door",
    ]


def test_deterministic_reruns(fzk_store, fzk_graph):
    transcript = [
        "SQL_NEEDED: SELECT COUNT(*) FROM room;",
        "ANALYSIS_COMPLETE",
        "7 rooms.",
    ]
    a = run(transcript, fzk_store, fzk_graph)
    b = run(transcript, fzk_store, fzk_graph)
    assert a.answer == b.answer
    assert json.dumps(a.state.to_dict(), sort_keys=True) == json.dumps(
        b.state.to_dict(), sort_keys=True
    )


def test_history_included_only_in_final_call(fzk_store, fzk_graph):
    history = [
        {"role": "user", "content": "earlier question"},
        {"role": "assistant", "content": "earlier answer"},
    ]
    calls: list[list[dict]] = []

    class RecordingBackend(ScriptedBackend):
        def complete(self, messages, temperature=0.0):
            calls.append(messages)
            return super().complete(messages, temperature)

    config = AgentConfig(
        primary=RecordingBackend(
            [
                "SQL_NEEDED: SELECT COUNT(*) FROM room;",
                "ANALYSIS_COMPLETE",
                "7 rooms.",
            ]
        )
    )
    run_agent(config, fzk_store, fzk_graph, "How many rooms?", history=history)
    assert len(calls[0]) == 1  # decision: no history
    assert len(calls[1]) == 1  # loop: no history
    assert len(calls[2]) == 3  # final: history + prompt
    assert calls[2][0]["content"] == "earlier question"


def test_transcript_exhaustion_propagates(fzk_store, fzk_graph):
    with pytest.raises(TranscriptExhaustedError):
        run(["SQL_NEEDED: SELECT COUNT(*) FROM room;"], fzk_store, fzk_graph)


# --- grading ----------------------------------------------------------------


def entry(columns, rows) -> StoreEntry:
    return StoreEntry(kind="sql", query="q", columns=columns, rows=rows)


def state_with(entries) -> AgentState:
    state = AgentState("q", "s", "g")
    state.results = entries
    return state


def test_oracle_kinds():
    table = entry(["a", "b"], [["x", 1], ["y", 2]])
    state = state_with([table])
    assert oracle_matches({"kind": "set", "column": 0, "values": ["x", "y"]}, state)
    assert oracle_matches({"kind": "rows", "values": [["y", 2], ["x", 1]]}, state)
    assert oracle_matches({"kind": "contains_all", "values": ["x", 2]}, state)
    assert oracle_matches({"kind": "cells", "at": [[0, 1, 1], [-1, 0, "y"]]}, state)
    assert not oracle_matches({"kind": "scalar", "value": "z"}, state)
    scalar = state_with([entry(["n"], [[7]])])
    assert oracle_matches({"kind": "scalar", "value": 7}, scalar)
    assert oracle_matches({"kind": "scalar", "value": 7.0000001, "tol": 1e-3}, scalar)
    path_state = state_with(
        [
            entry(
                ["step", "node_id", "node_type", "name", "distance_from_start"],
                [
                    [0, "i", "room", "6", 0.0],
                    [1, "j", "room", "5", 4.0],
                    [2, "k", "stair", "w", 6.0],
                    [3, "l", "room", "7", 10.33],
                ],
            )
        ]
    )
    assert oracle_matches(
        {"kind": "path", "names": ["6", "5", "w", "7"], "total": 10.32,
         "tol": 0.05},
        path_state,
    )
    assert not oracle_matches(
        {"kind": "path", "names": ["6", "7"], "total": 10.32, "tol": 0.05},
        path_state,
    )
    with pytest.raises(ValueError):
        oracle_matches({"kind": "mystery"}, scalar)
