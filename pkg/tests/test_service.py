from __future__ import annotations

import threading
import time

import pytest
from fastapi.testclient import TestClient

from bimql.agent.backends import ScriptedBackend
from bimql.agent.loop import AgentConfig
from bimql.app.service import create_app
from bimql.errors import BackendUnavailableError


@pytest.fixture()
def client(fzk_store, fzk_graph, tmp_path):
    config = AgentConfig(
        primary=ScriptedBackend(
            [
                "SQL_NEEDED: SELECT s.name, COUNT(r.id) FROM storey s "
                "LEFT JOIN room r ON r.storey_id = s.id GROUP BY s.id "
                "ORDER BY s.elevation;",
                "ANALYSIS_COMPLETE",
                "Erdgeschoss has 6 rooms and Dachgeschoss has 1 room.",
            ],
            name="scripted-primary",
        ),
        fallback=ScriptedBackend([], name="scripted-fallback"),
    )
    app = create_app(fzk_store, fzk_graph, config, tmp_path / "sessions")
    return TestClient(app)


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_chat_round_trip_with_trace(client):
    session = client.post("/sessions").json()["session_id"]
    response = client.post(
        f"/sessions/{session}/messages",
        json={"text": "How many rooms are on each storey?"},
    )
    assert response.status_code == 200
    payload = response.json()
    assert "6" in payload["answer"] and "1" in payload["answer"]
    trace = payload["trace"]
    assert trace["iterations"] == 1
    assert len(trace["results"]) == 1
    assert trace["results"][0]["rows"] == [["Erdgeschoss", 6], ["Dachgeschoss", 1]]
    assert not trace["fallback_engaged"]
    assert [c["backend"] for c in trace["calls"]] == ["scripted-primary"] * 3


def test_unknown_session_404(client):
    response = client.post("/sessions/deadbeef/messages", json={"text": "hi"})
    assert response.status_code == 404


def test_busy_session_409(fzk_store, fzk_graph, tmp_path):
    release = threading.Event()

    class SlowBackend(ScriptedBackend):
        def complete(self, messages, temperature=0.0):
            release.wait(timeout=5)
            return super().complete(messages, temperature)

    config = AgentConfig(
        primary=SlowBackend(["slow answer", "slow answer"])
    )
    app = create_app(fzk_store, fzk_graph, config, tmp_path / "s2")
    client = TestClient(app)
    session = client.post("/sessions").json()["session_id"]

    codes: list[int] = []

    def first():
        codes.append(
            client.post(
                f"/sessions/{session}/messages", json={"text": "one"}
            ).status_code
        )

    worker = threading.Thread(target=first)
    worker.start()
    time.sleep(0.2)
    second = client.post(f"/sessions/{session}/messages", json={"text": "two"})
    assert second.status_code == 409
    release.set()
    worker.join(timeout=5)
    assert codes == [200]


def test_backend_unavailable_503(fzk_store, fzk_graph, tmp_path):
    class DownBackend:
        name = "down"

        def complete(self, messages, temperature=0.0):
            raise BackendUnavailableError("connection refused")

    config = AgentConfig(primary=DownBackend())
    app = create_app(fzk_store, fzk_graph, config, tmp_path / "s3")
    client = TestClient(app)
    session = client.post("/sessions").json()["session_id"]
    response = client.post(f"/sessions/{session}/messages", json={"text": "x"})
    assert response.status_code == 503
    assert response.json()["detail"]["retryable"] is True


def test_model_summary(client):
    payload = client.get("/model/summary").json()
    assert "door" in payload["schema"]
    assert "room: 7" in payload["graph"]


def test_scene_box_count_equals_node_count(client, fzk_graph):
    scene = client.get("/model/scene").json()
    assert len(scene["boxes"]) == fzk_graph.node_count() == 13
    assert scene["highlights"] == []
    assert scene["units"] == "meters"
    ids = {box["id"] for box in scene["boxes"]}
    assert ids == set(fzk_graph.nodes)
    for box in scene["boxes"]:
        assert all(a <= b for a, b in zip(box["min"], box["max"]))


def test_scene_highlight_path(client, fzk_graph):
    scene = client.get(
        "/model/scene",
        params={"highlight_from": "room:6", "highlight_to": "room:7"},
    ).json()
    names = [fzk_graph.nodes[i].name for i in scene["highlights"]]
    assert names == ["6", "5", "Wendeltreppe", "7"]
    box_ids = {box["id"] for box in scene["boxes"]}
    assert all(h in box_ids for h in scene["highlights"])


def test_scene_unknown_highlight_404(client):
    response = client.get(
        "/model/scene",
        params={"highlight_from": "room:99", "highlight_to": "room:7"},
    )
    assert response.status_code == 404


def test_scene_meshes_optional(client):
    scene = client.get("/model/scene", params={"meshes": "true"}).json()
    assert len(scene["meshes"]) == len(scene["boxes"])
    sample = scene["meshes"][0]
    assert sample["vertices"] and sample["faces"]


def test_history_persists_across_turns(fzk_store, fzk_graph, tmp_path):
    config = AgentConfig(
        primary=ScriptedBackend(
            [
                "first answer",  # direct answer turn 1 (decision)
                "first answer",  # final turn 1
                "second answer",  # decision turn 2
                "second answer",  # final turn 2
            ]
        )
    )
    app = create_app(fzk_store, fzk_graph, config, tmp_path / "s4")
    client = TestClient(app)
    session = client.post("/sessions").json()["session_id"]
    client.post(f"/sessions/{session}/messages", json={"text": "q1"})
    client.post(f"/sessions/{session}/messages", json={"text": "q2"})
    state = app.state.service.load_session(session)
    assert [m["role"] for m in state["history"]] == [
        "user", "assistant", "user", "assistant",
    ]
