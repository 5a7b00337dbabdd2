"""The bounded retry-and-refine agent loop.

One user turn runs: schema/graph summaries -> an initial decision call ->
execution of the requested queries -> up to ``max_iters`` refinement
calls -> a final answer call over the accumulated result store. Results
whose token estimate exceeds the context guard are replaced by a guard
notice and the turn is retried; the second guard trip switches to the
fallback backend for the rest of the conversation. Backend calls per
turn never exceed max_iters + 3.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from bimql.agent.backends import LlmBackend
from bimql.agent.decision import LlmDecision, parse_decision
from bimql.agent.prompts import (
    render_final_prompt,
    render_intermediate_prompt,
    render_system_prompt,
)
from bimql.errors import (
    MalformedGraphQueryError,
    NodeNotFoundError,
    NonSelectRejectedError,
    NoPathError,
    RowLimitExceededError,
    SqlError,
)
from bimql.graph.build import summarize_graph
from bimql.graph.model import TopoGraph
from bimql.graph.query import run_graph_query
from bimql.store.db import RelationalStore
from bimql.table import ResultTable, result_size_estimate


@dataclass
class AgentConfig:
    primary: LlmBackend
    fallback: LlmBackend | None = None
    max_iters: int = 5
    context_guard: int = 8000
    temperature: float = 0.0

    def __post_init__(self) -> None:
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.context_guard <= 0:
            raise ValueError("context guard must be positive")


@dataclass
class StoreEntry:
    kind: str  # "sql" | "graph"
    query: str
    columns: list[str] | None = None
    rows: list[list] | None = None
    error: str | None = None
    guard_notice: str | None = None
    via_fallback: bool = False

    def table(self) -> ResultTable | None:
        if self.columns is None:
            return None
        return ResultTable(columns=self.columns, rows=self.rows or [])

    def render(self, index: int) -> str:
        head = f"[{index}] {self.kind.upper()}: {self.query}"
        if self.guard_notice is not None:
            return f"{head}\n{self.guard_notice}"
        if self.error is not None:
            return f"{head}\nERROR: {self.error}"
        return f"{head}\n{self.table().serialize() or '(no rows)'}"


@dataclass
class AgentState:
    user_query: str
    schema_summary: str
    graph_summary: str
    results: list[StoreEntry] = field(default_factory=list)
    iterations: int = 0
    calls: list[dict] = field(default_factory=list)
    guard_events: list[dict] = field(default_factory=list)
    fallback_engaged: bool = False
    incomplete: bool = False

    def results_text(self) -> str:
        if not self.results:
            return "(no queries executed)"
        return "\n\n".join(
            entry.render(i) for i, entry in enumerate(self.results, start=1)
        )

    def to_dict(self) -> dict:
        return {
            "user_query": self.user_query,
            "results": [asdict(entry) for entry in self.results],
            "iterations": self.iterations,
            "calls": self.calls,
            "guard_events": self.guard_events,
            "fallback_engaged": self.fallback_engaged,
            "incomplete": self.incomplete,
        }


@dataclass
class AgentResult:
    answer: str
    state: AgentState


def run_agent(
    config: AgentConfig,
    store: RelationalStore,
    graph: TopoGraph,
    user_query: str,
    history: list[dict] | None = None,
    fallback_engaged: bool = False,
) -> AgentResult:
    """Execute one user turn against the store and graph."""
    schema_summary = store.summarize_schema()
    graph_summary = summarize_graph(graph)
    state = AgentState(
        user_query=user_query,
        schema_summary=schema_summary,
        graph_summary=graph_summary,
        fallback_engaged=fallback_engaged and config.fallback is not None,
    )

    budget = config.max_iters + 3
    calls_used = 0

    def backend() -> LlmBackend:
        if state.fallback_engaged and config.fallback is not None:
            return config.fallback
        return config.primary

    def invoke(phase: str, prompt: str, extra_history: bool = False) -> str:
        nonlocal calls_used
        current = backend()
        messages = list(history or []) if extra_history else []
        messages.append({"role": "user", "content": prompt})
        response = current.complete(messages, temperature=config.temperature)
        calls_used += 1
        state.calls.append(
            {
                "phase": phase,
                "backend": current.name,
                "prompt": prompt,
                "response": response,
            }
        )
        return response

    def execute_batch(decision: LlmDecision) -> bool:
        tripped = False
        fresh: list[StoreEntry] = []
        via_fallback = state.fallback_engaged
        for sql in decision.sql_queries:
            entry = StoreEntry(kind="sql", query=sql, via_fallback=via_fallback)
            try:
                table = store.execute_sql(sql)
                entry.columns, entry.rows = table.columns, table.rows
            except (NonSelectRejectedError, SqlError, RowLimitExceededError) as exc:
                entry.error = str(exc)
            fresh.append(entry)
        for raw, query in decision.graph_queries:
            entry = StoreEntry(kind="graph", query=raw, via_fallback=via_fallback)
            try:
                table = run_graph_query(graph, query)
                entry.columns, entry.rows = table.columns, table.rows
            except (NodeNotFoundError, NoPathError, MalformedGraphQueryError) as exc:
                entry.error = str(exc)
            fresh.append(entry)
        for raw, message in decision.malformed:
            fresh.append(
                StoreEntry(
                    kind="graph",
                    query=raw,
                    error=f"malformed graph query: {message}",
                    via_fallback=via_fallback,
                )
            )
        for entry in fresh:
            table = entry.table()
            if table is not None:
                estimate = result_size_estimate(table)
                if estimate > config.context_guard:
                    entry.columns = None
                    entry.rows = None
                    entry.guard_notice = (
                        f"[context guard] the result was withheld: estimated "
                        f"{estimate} tokens exceeds the {config.context_guard} "
                        f"token budget. Reformulate with a narrower query."
                    )
                    state.guard_events.append(
                        {
                            "query": entry.query,
                            "kind": entry.kind,
                            "estimated_tokens": estimate,
                            "budget": config.context_guard,
                        }
                    )
                    tripped = True
        state.results.extend(fresh)
        if tripped and len(state.guard_events) >= 2 and config.fallback is not None:
            state.fallback_engaged = True
        return tripped

    def mid_prompt() -> str:
        return render_intermediate_prompt(
            user_query, schema_summary, graph_summary, state.results_text()
        )

    # Step 1 summaries are above; Step 2: decide actions
    initial_prompt = render_system_prompt(
        element_types=store.element_types_present(),
        graph_summary=graph_summary,
        property_names=store.property_names(),
        user_query=user_query,
    )
    decision = parse_decision(invoke("decision", initial_prompt), "initial")

    if not decision.direct_answer:
        # Step 3: execute the initial batch
        retry_pending = execute_batch(decision)
        # Step 4: iterative completeness loop
        complete = False
        while state.iterations < config.max_iters or retry_pending:
            if calls_used >= budget - 1:  # reserve the final-answer call
                break
            if retry_pending:
                retry_pending = False
                phase = "guard-retry"
            else:
                state.iterations += 1
                phase = "loop"
            update = parse_decision(invoke(phase, mid_prompt()), "loop")
            if update.complete:
                complete = True
                break
            if update.has_queries():
                retry_pending = execute_batch(update)
        if not complete:
            state.incomplete = True

    # Step 5: final answer from (query, result store)
    final_prompt = render_final_prompt(user_query, state.results_text())
    answer = invoke("final", final_prompt, extra_history=True)
    assert calls_used <= budget
    return AgentResult(answer=answer, state=state)
