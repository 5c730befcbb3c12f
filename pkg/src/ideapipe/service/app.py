"""HTTP service over the orchestrator: sessions, artifacts, gates, SSE logs."""

from __future__ import annotations

import json
import queue
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import StreamingResponse

from ..config import PipelineConfig
from ..errors import InvalidConfig, InvalidEdit, NotFound, WrongState
from ..orchestrator import Orchestrator
from ..orchestrator.events import LogEvent, PhaseSink
from .schemas import CreateSessionRequest, GateRequest, SessionView, session_view


class SessionRunner:
    """Runs sessions on background threads, one at a time per session."""

    def __init__(self, orchestrator: Orchestrator):
        self._orchestrator = orchestrator
        self._running: set[str] = set()
        self._lock = threading.Lock()

    def start(self, session_id: str) -> None:
        with self._lock:
            if session_id in self._running:
                return
            self._running.add(session_id)
        thread = threading.Thread(target=self._run, args=(session_id,), daemon=True)
        thread.start()

    def _run(self, session_id: str) -> None:
        try:
            self._orchestrator.run(session_id)
        except Exception as exc:  # must never die without a terminal event
            try:
                state = self._orchestrator.load_state(session_id)
                sink = PhaseSink(self._orchestrator.event_log(session_id), phase=state.phase)
                self._orchestrator._fail(state, sink, exc)
            except Exception:
                pass
        finally:
            with self._lock:
                self._running.discard(session_id)

    def wait_idle(self, session_id: str, timeout: float = 30.0) -> None:
        """Test helper: block until the session's worker thread is done."""
        import time

        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            with self._lock:
                if session_id not in self._running:
                    return
            time.sleep(0.01)


def _elapsed_seconds(started_at: str, updated_at: str, active: bool) -> float:
    started = datetime.fromisoformat(started_at)
    if active:
        return (datetime.now(timezone.utc) - started).total_seconds()
    return (datetime.fromisoformat(updated_at) - started).total_seconds()


def _sse_frame(event: LogEvent) -> str:
    return f"id: {event.seq}\nevent: log\ndata: {json.dumps(event.to_dict(), ensure_ascii=False)}\n\n"


def create_app(
    state_dir: str | Path,
    *,
    backend_factory=None,
    fixtures_dir: str | Path | None = None,
    default_backend: str = "scripted",
    heartbeat_seconds: float = 15.0,
) -> FastAPI:
    orchestrator = Orchestrator(state_dir, backend_factory=backend_factory,
                                fixtures_dir=fixtures_dir)
    runner = SessionRunner(orchestrator)
    app = FastAPI(title="ideapipe", version="0.1.0")
    app.state.orchestrator = orchestrator
    app.state.runner = runner

    def view_of(session_id: str) -> SessionView:
        try:
            state = orchestrator.load_state(session_id)
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return session_view(
            state, _elapsed_seconds(state.started_at, state.updated_at, state.active))

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions", status_code=201, response_model=SessionView)
    def create_session(body: CreateSessionRequest) -> SessionView:
        overrides = dict(body.config_overrides or {})
        overrides["topic"] = body.topic
        if body.num_ideas is not None:
            overrides["num_ideas"] = body.num_ideas
        overrides.setdefault("backend", default_backend)
        try:
            config = PipelineConfig().with_overrides(overrides)
            state = orchestrator.create_session(config)
        except InvalidConfig as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        runner.start(state.session_id)
        return view_of(state.session_id)

    @app.get("/sessions", response_model=list[SessionView])
    def list_sessions() -> list[SessionView]:
        return [view_of(session_id) for session_id in orchestrator.list_sessions()]

    @app.get("/sessions/{session_id}", response_model=SessionView)
    def get_session(session_id: str) -> SessionView:
        return view_of(session_id)

    @app.get("/sessions/{session_id}/artifacts/{name}")
    def get_artifact(session_id: str, name: str) -> Response:
        try:
            orchestrator.load_state(session_id)
            body = orchestrator.store(session_id).read_bytes(name)
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return Response(content=body, media_type="application/json")

    @app.post("/sessions/{session_id}/gate", response_model=SessionView)
    def resolve_gate(session_id: str, body: GateRequest) -> SessionView:
        try:
            state = orchestrator.resolve_gate(session_id, body.action, body.payload)
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except WrongState as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except InvalidEdit as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        if body.action == "approve" and state.active:
            runner.start(session_id)
        return view_of(session_id)

    @app.get("/sessions/{session_id}/events")
    def stream_events(session_id: str, request: Request, last_seq: int = 0):
        try:
            orchestrator.load_state(session_id)
        except NotFound as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

        header_seq = request.headers.get("last-event-id")
        from_seq = max(last_seq, int(header_seq) if header_seq and header_seq.isdigit() else 0)
        log = orchestrator.event_log(session_id)

        def generate():
            replay, live = log.subscribe(from_seq)
            delivered = from_seq
            try:
                for event in replay:
                    if event.seq <= delivered:
                        continue
                    delivered = event.seq
                    yield _sse_frame(event)
                    if event.terminal:
                        return
                while True:
                    try:
                        event = live.get(timeout=heartbeat_seconds)
                    except queue.Empty:
                        yield ": heartbeat\n\n"
                        continue
                    if event.seq <= delivered:
                        continue
                    delivered = event.seq
                    yield _sse_frame(event)
                    if event.terminal:
                        return
            finally:
                log.unsubscribe(live)

        return StreamingResponse(generate(), media_type="text/event-stream",
                                 headers={"Cache-Control": "no-cache"})

    return app
