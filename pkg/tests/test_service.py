"""HTTP service conformance: sessions, artifacts, gates, SSE streaming.

Finite SSE streams are exercised through the in-process test client (which
buffers whole responses); the stays-open semantics need a real server, so
one test spins up uvicorn on an ephemeral port.
"""

from __future__ import annotations

import json
import threading
import time

import httpx
import pytest
import uvicorn
from fastapi.testclient import TestClient

from conftest import TOPIC, synthetic_backend_factory
from ideapipe.service import create_app


@pytest.fixture
def client(tmp_path):
    app = create_app(tmp_path / "state", heartbeat_seconds=0.05)
    with TestClient(app) as test_client:
        yield test_client


@pytest.fixture
def live_server(tmp_path):
    app = create_app(tmp_path / "state", heartbeat_seconds=0.05)
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="warning")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.monotonic() + 10
    while not server.started:
        if time.monotonic() > deadline:
            raise RuntimeError("uvicorn never started")
        time.sleep(0.01)
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


@pytest.fixture
def synthetic_client(tmp_path):
    app = create_app(tmp_path / "state", backend_factory=synthetic_backend_factory,
                     heartbeat_seconds=0.05)
    with TestClient(app) as test_client:
        yield test_client


def wait_for_phase(client: TestClient, session_id: str, phases, timeout=30.0) -> dict:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        view = client.get(f"/sessions/{session_id}").json()
        if view["phase"] in phases:
            return view
        time.sleep(0.02)
    raise AssertionError(f"session never reached {phases}; last view {view}")


def create_session(client: TestClient, **overrides) -> str:
    body = {"topic": TOPIC}
    body.update(overrides)
    response = client.post("/sessions", json=body)
    assert response.status_code == 201, response.text
    return response.json()["session_id"]


class TestSessions:
    def test_healthz(self, client):
        assert client.get("/healthz").json() == {"status": "ok"}

    def test_create_and_progress_to_completion(self, client):
        session_id = create_session(client)
        view = wait_for_phase(client, session_id, {"completed", "failed"})
        assert view["phase"] == "completed"
        assert view["progress"]["phase_ordinal"] == 4
        assert view["progress"]["total_phases"] == 4
        assert len(view["artifacts"]) >= 6
        listing = client.get("/sessions").json()
        assert any(item["session_id"] == session_id for item in listing)

    def test_invalid_bodies_rejected(self, client):
        assert client.post("/sessions", json={}).status_code == 422
        response = client.post("/sessions", json={
            "topic": TOPIC, "config_overrides": {"internal_weight_novelty": 0.9}})
        assert response.status_code == 400
        response = client.post("/sessions", json={
            "topic": TOPIC, "config_overrides": {"not_a_field": 1}})
        assert response.status_code == 400

    def test_unknown_session_404(self, client):
        assert client.get("/sessions/s-missing").status_code == 404
        assert client.get("/sessions/s-missing/artifacts/x").status_code == 404
        assert client.post("/sessions/s-missing/gate",
                           json={"action": "approve"}).status_code == 404
        assert client.get("/sessions/s-missing/events").status_code == 404

    def test_view_is_pure_and_redacts_nothing_secret_by_default(self, client):
        session_id = create_session(client)
        view = wait_for_phase(client, session_id, {"completed"})
        assert "topic" in view["config"]
        assert view["failure"] is None


class TestArtifacts:
    def test_download_byte_matches_disk(self, client, tmp_path):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        response = client.get(f"/sessions/{session_id}/artifacts/reviewing_portfolio")
        assert response.status_code == 200
        disk = (tmp_path / "state" / "sessions" / session_id / "artifacts"
                / "reviewing_portfolio.json").read_bytes()
        assert response.content == disk

    def test_unknown_artifact_404(self, client):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        assert client.get(f"/sessions/{session_id}/artifacts/nope").status_code == 404


class TestGates:
    def test_gate_on_completed_session_409(self, client):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        response = client.post(f"/sessions/{session_id}/gate", json={"action": "approve"})
        assert response.status_code == 409

    def test_gated_session_advances_on_approve(self, client):
        session_id = create_session(
            client, config_overrides={"hitl": "gate_each_phase"})
        view = wait_for_phase(client, session_id, {"awaiting_gate"})
        assert view["gate_phase"] == "curating"
        response = client.post(f"/sessions/{session_id}/gate", json={"action": "approve"})
        assert response.status_code == 200
        view = wait_for_phase(client, session_id, {"awaiting_gate"})
        assert view["gate_phase"] == "generating"
        for _ in range(2):
            client.post(f"/sessions/{session_id}/gate", json={"action": "approve"})
            view = wait_for_phase(client, session_id, {"awaiting_gate", "completed"})
        client.post(f"/sessions/{session_id}/gate", json={"action": "approve"})
        assert wait_for_phase(client, session_id, {"completed"})["phase"] == "completed"

    def test_gate_edit_validates_and_round_trips(self, synthetic_client):
        client = synthetic_client
        session_id = create_session(
            client, config_overrides={"hitl": "gate_each_phase"})
        wait_for_phase(client, session_id, {"awaiting_gate"})

        bad = client.post(f"/sessions/{session_id}/gate", json={
            "action": "edit",
            "payload": {"artifact": "curating_papers", "content": {"papers": "nope"}}})
        assert bad.status_code == 400

        papers = client.get(f"/sessions/{session_id}/artifacts/curating_papers").json()
        papers["papers"] = papers["papers"][:10]
        good = client.post(f"/sessions/{session_id}/gate", json={
            "action": "edit",
            "payload": {"artifact": "curating_papers", "content": papers}})
        assert good.status_code == 200
        assert good.json()["phase"] == "awaiting_gate"
        edited = client.get(f"/sessions/{session_id}/artifacts/curating_papers").json()
        assert len(edited["papers"]) == 10

    def test_gate_abort_fails_session(self, client):
        session_id = create_session(
            client, config_overrides={"hitl": "gate_each_phase"})
        wait_for_phase(client, session_id, {"awaiting_gate"})
        response = client.post(f"/sessions/{session_id}/gate", json={"action": "abort"})
        assert response.status_code == 200
        view = wait_for_phase(client, session_id, {"failed"})
        assert view["failure"]["error"] == "user_abort"


def read_sse_events(client, session_id, last_seq=0, stop_at_terminal=True, max_lines=10000):
    """Collect parsed SSE events until the stream closes."""
    events = []
    with client.stream("GET", f"/sessions/{session_id}/events",
                       params={"last_seq": last_seq}) as response:
        assert response.status_code == 200
        assert response.headers["content-type"].startswith("text/event-stream")
        for line in response.iter_lines():
            if line.startswith("data: "):
                events.append(json.loads(line[len("data: "):]))
            if len(events) >= max_lines:
                break
    return events


class TestEventStream:
    def test_full_subscription_is_contiguous_and_ends_terminal(self, client):
        session_id = create_session(client)
        events = read_sse_events(client, session_id)
        seqs = [e["seq"] for e in events]
        assert seqs[0] == 1
        assert seqs == list(range(1, len(seqs) + 1))
        assert events[-1]["payload"]["terminal"] is True

    def test_resume_from_seq_five_starts_at_six(self, client):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        events = read_sse_events(client, session_id, last_seq=5)
        assert events[0]["seq"] == 6

    def test_reconnect_has_no_duplicate_seqs(self, client):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        first_connection = []
        with client.stream("GET", f"/sessions/{session_id}/events") as response:
            for line in response.iter_lines():
                if line.startswith("data: "):
                    first_connection.append(json.loads(line[len("data: "):]))
                    if len(first_connection) == 4:
                        break  # forced disconnect
        resume_from = first_connection[-1]["seq"]
        second_connection = read_sse_events(client, session_id, last_seq=resume_from)
        seqs = [e["seq"] for e in first_connection + second_connection]
        assert seqs == sorted(set(seqs))
        assert seqs == list(range(1, len(seqs) + 1))
        assert second_connection[-1]["payload"]["terminal"] is True

    def test_beyond_tail_stays_open_with_heartbeats(self, live_server):
        with httpx.Client(base_url=live_server, timeout=10.0) as client:
            session_id = create_session(client, config_overrides={"hitl": "gate_each_phase"})
            wait_for_phase(client, session_id, {"awaiting_gate"})
            saw_heartbeat = False
            with client.stream("GET", f"/sessions/{session_id}/events",
                               params={"last_seq": 10_000}) as response:
                for line in response.iter_lines():
                    if line.startswith(":"):
                        saw_heartbeat = True
                        break
                    if line.startswith("data: "):
                        raise AssertionError(f"unexpected event past the tail: {line}")
            assert saw_heartbeat
            client.post(f"/sessions/{session_id}/gate", json={"action": "abort"})

    def test_mid_run_stream_over_live_server_reaches_terminal(self, live_server):
        # subscribe while the session is actually executing on the server
        with httpx.Client(base_url=live_server, timeout=30.0) as client:
            session_id = create_session(client)
            events = []
            with client.stream("GET", f"/sessions/{session_id}/events") as response:
                for line in response.iter_lines():
                    if line.startswith("data: "):
                        events.append(json.loads(line[len("data: "):]))
            seqs = [e["seq"] for e in events]
            assert seqs == list(range(1, len(seqs) + 1))
            assert events[-1]["payload"]["terminal"] is True

    def test_last_event_id_header_supported(self, client):
        session_id = create_session(client)
        wait_for_phase(client, session_id, {"completed"})
        with client.stream("GET", f"/sessions/{session_id}/events",
                           headers={"Last-Event-ID": "3"}) as response:
            for line in response.iter_lines():
                if line.startswith("data: "):
                    assert json.loads(line[len("data: "):])["seq"] == 4
                    break
