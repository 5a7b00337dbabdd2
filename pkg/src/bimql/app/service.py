"""HTTP JSON API over an ingested model.

Sessions hold chat history server-side under a data directory and allow
one in-flight turn at a time (a second concurrent message gets a 409).
"""

from __future__ import annotations

import json
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from bimql.agent.loop import AgentConfig, run_agent
from bimql.app.scene import build_scene
from bimql.errors import BackendUnavailableError, NodeNotFoundError
from bimql.graph.build import summarize_graph
from bimql.graph.model import TopoGraph
from bimql.store.db import RelationalStore


class MessageIn(BaseModel):
    text: str


class ServiceState:
    def __init__(
        self,
        store: RelationalStore,
        graph: TopoGraph,
        config: AgentConfig,
        data_dir: str | Path,
    ):
        self.store = store
        self.graph = graph
        self.config = config
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def session_path(self, session_id: str) -> Path:
        return self.data_dir / f"{session_id}.json"

    def create_session(self) -> str:
        session_id = uuid.uuid4().hex
        self.session_path(session_id).write_text(
            json.dumps({"history": [], "fallback_engaged": False})
        )
        return session_id

    def load_session(self, session_id: str) -> dict:
        path = self.session_path(session_id)
        if not path.exists():
            raise KeyError(session_id)
        return json.loads(path.read_text())

    def save_session(self, session_id: str, session: dict) -> None:
        self.session_path(session_id).write_text(json.dumps(session))

    def lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())


def create_app(
    store: RelationalStore,
    graph: TopoGraph,
    config: AgentConfig,
    data_dir: str | Path,
) -> FastAPI:
    state = ServiceState(store, graph, config, data_dir)
    app = FastAPI(title="bimql", version="0.1.0")
    app.state.service = state

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201)
    def create_session() -> dict:
        return {"session_id": state.create_session()}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, message: MessageIn) -> dict:
        try:
            session = state.load_session(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        lock = state.lock_for(session_id)
        if not lock.acquire(blocking=False):
            raise HTTPException(status_code=409, detail="session is busy")
        try:
            try:
                result = run_agent(
                    state.config,
                    state.store,
                    state.graph,
                    message.text,
                    history=session["history"],
                    fallback_engaged=session.get("fallback_engaged", False),
                )
            except BackendUnavailableError as exc:
                raise HTTPException(
                    status_code=503,
                    detail={"error": str(exc), "retryable": True},
                )
            session["history"].append({"role": "user", "content": message.text})
            session["history"].append({"role": "assistant", "content": result.answer})
            session["fallback_engaged"] = result.state.fallback_engaged
            state.save_session(session_id, session)
            return {"answer": result.answer, "trace": result.state.to_dict()}
        finally:
            lock.release()

    @app.get("/model/summary")
    def model_summary() -> dict:
        return {
            "schema": state.store.summarize_schema(),
            "graph": summarize_graph(state.graph),
        }

    @app.get("/model/scene")
    def model_scene(
        highlight_from: str | None = None,
        highlight_to: str | None = None,
        meshes: bool = False,
    ) -> dict:
        highlight = None
        if highlight_from and highlight_to:
            highlight = (_parse_ref(highlight_from), _parse_ref(highlight_to))
        try:
            return build_scene(
                state.store, state.graph, highlight, include_meshes=meshes
            )
        except NodeNotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    return app


def _parse_ref(text: str):
    """'room:6' -> {"type": "room", "name": "6"}; anything else is a GUID."""
    if ":" in text:
        node_type, _, name = text.partition(":")
        return {"type": node_type, "name": name}
    return text
