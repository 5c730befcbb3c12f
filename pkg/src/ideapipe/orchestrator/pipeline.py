"""Session lifecycle owner: create, run, gate, resume."""

from __future__ import annotations

import os
import random
import threading
import time
import uuid
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..config import PipelineConfig
from ..errors import IdeaPipeError, InvalidEdit, WrongState
from ..events import EventSink
from ..gateway import (
    ChatBackend,
    EmbeddingBackend,
    Gateway,
    LiveChatBackend,
    LiveEmbeddingBackend,
    ScriptedChatBackend,
    StubEmbeddingBackend,
)
from ..retrieval import FixtureSearchClient, HttpSearchClient, SearchClient
from .events import EventLog, PhaseSink
from .phases import PHASE_FUNCTIONS, PhaseRuntime
from .session import PHASES, SessionState
from .store import ArtifactStore, validate_artifact


@dataclass
class BackendBundle:
    chat: ChatBackend
    embedding: EmbeddingBackend
    search: SearchClient


def bundled_fixtures_path() -> Path:
    return Path(str(resources.files("ideapipe") / "fixtures" / "ktruss"))


def default_backend_factory(config: PipelineConfig, events: EventSink, *,
                            fixtures_dir: str | Path | None = None) -> BackendBundle:
    if config.backend == "scripted":
        fixtures = Path(fixtures_dir) if fixtures_dir else bundled_fixtures_path()
        return BackendBundle(
            chat=ScriptedChatBackend.from_file(fixtures / "chat.json"),
            embedding=StubEmbeddingBackend(config.embedding_seed, config.embedding_dim),
            search=FixtureSearchClient.from_file(fixtures / "search.json", events=events),
        )
    chat_base = os.environ.get("IDEAPIPE_CHAT_BASE_URL", "https://api.openai.com/v1")
    chat_key = os.environ.get("IDEAPIPE_CHAT_API_KEY", "")
    return BackendBundle(
        chat=LiveChatBackend(
            chat_base, chat_key, os.environ.get("IDEAPIPE_CHAT_MODEL", "gpt-4.1"),
        ),
        embedding=LiveEmbeddingBackend(
            os.environ.get("IDEAPIPE_EMBED_BASE_URL", chat_base),
            os.environ.get("IDEAPIPE_EMBED_API_KEY", chat_key),
            os.environ.get("IDEAPIPE_EMBED_MODEL", "bge-m3"),
        ),
        search=HttpSearchClient(events=events),
    )


def _rng_state_to_json(rng: random.Random) -> list:
    version, internal, gauss_next = rng.getstate()
    return [version, list(internal), gauss_next]


def _rng_state_from_json(data: list) -> tuple:
    return (data[0], tuple(data[1]), data[2])


def _merge_stats(base: dict, current: dict) -> dict:
    merged = {
        key: base.get(key, 0) + current.get(key, 0)
        for key in ("calls", "prompt_tokens", "completion_tokens", "retries", "repairs")
    }
    by_agent = dict(base.get("calls_by_agent", {}))
    for agent, count in current.get("calls_by_agent", {}).items():
        by_agent[agent] = by_agent.get(agent, 0) + count
    merged["calls_by_agent"] = dict(sorted(by_agent.items()))
    return merged


class Orchestrator:
    """Owns every session under one state directory.

    One logical writer mutates a session at a time; the event log is the
    only concurrently shared sink and serializes itself.
    """

    def __init__(self, state_dir: str | Path, *, backend_factory=None,
                 fixtures_dir: str | Path | None = None):
        self.state_dir = Path(state_dir)
        self.sessions_dir = self.state_dir / "sessions"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)
        self._fixtures_dir = fixtures_dir
        self._backend_factory = backend_factory
        self._logs: dict[str, EventLog] = {}
        self._registry_lock = threading.Lock()

    # -- plumbing ---------------------------------------------------------------

    def session_dir(self, session_id: str) -> Path:
        return self.sessions_dir / session_id

    def list_sessions(self) -> list[str]:
        return sorted(p.name for p in self.sessions_dir.iterdir() if p.is_dir())

    def load_state(self, session_id: str) -> SessionState:
        return SessionState.load(self.session_dir(session_id))

    def store(self, session_id: str) -> ArtifactStore:
        return ArtifactStore(self.session_dir(session_id))

    def event_log(self, session_id: str) -> EventLog:
        with self._registry_lock:
            if session_id not in self._logs:
                self._logs[session_id] = EventLog(self.session_dir(session_id) / "events.ndjson")
            return self._logs[session_id]

    def _backends(self, config: PipelineConfig, events: EventSink) -> BackendBundle:
        if self._backend_factory is not None:
            return self._backend_factory(config, events)
        return default_backend_factory(config, events, fixtures_dir=self._fixtures_dir)

    # -- lifecycle ---------------------------------------------------------------

    def create_session(self, config: PipelineConfig) -> SessionState:
        config = config.snapshot()
        config.validate()
        session_id = f"s-{uuid.uuid4().hex[:12]}"
        session_dir = self.session_dir(session_id)
        session_dir.mkdir(parents=True)
        state = SessionState(session_id=session_id, config=config)
        state.save(session_dir)
        log = self.event_log(session_id)
        log.emit(phase="created", agent_tag="orchestrator", level="info",
                 message=f"session created for topic {config.topic!r}")
        state.event_seq = log.last_seq
        state.save(session_dir)
        return state

    def run(self, session_id: str) -> SessionState:
        state = self.load_state(session_id)
        if state.phase == "awaiting_gate" or not state.active:
            return state

        session_dir = self.session_dir(session_id)
        log = self.event_log(session_id)
        sink = PhaseSink(log, phase=state.phase)

        rng = random.Random(state.config.rng_seed)
        if state.rng_state is not None:
            rng.setstate(_rng_state_from_json(state.rng_state))

        try:
            bundle = self._backends(state.config, sink)
        except Exception as exc:
            return self._fail(state, sink, exc)

        gateway = Gateway(
            bundle.chat, bundle.embedding,
            max_retries=state.config.max_retries,
            retry_base_delay=state.config.retry_base_delay,
            concurrency_budget=state.config.concurrency_budget,
        )
        runtime = PhaseRuntime(config=state.config, store=self.store(session_id),
                               sink=sink, gateway=gateway, search=bundle.search, rng=rng)
        stats_base = dict(state.stats.get("gateway", {}))

        while (next_phase := state.next_phase()) is not None:
            sink.phase = next_phase
            state.phase = next_phase
            state.save(session_dir)
            sink.emit("info", f"phase {next_phase} started")
            phase_started = time.monotonic()
            try:
                PHASE_FUNCTIONS[next_phase](runtime)
            except Exception as exc:
                return self._fail(state, sink, exc)

            produced = [name for name in runtime.store.names()
                        if name.startswith(f"{next_phase}_")]
            if not produced:
                return self._fail(
                    state, sink,
                    IdeaPipeError(f"phase {next_phase} advanced without writing an artifact"),
                )

            state.completed_phases.append(next_phase)
            state.rng_state = _rng_state_to_json(rng)
            state.artifact_index = {
                name: f"artifacts/{name}.json" for name in runtime.store.names()
            }
            state.stats["gateway"] = _merge_stats(stats_base, gateway.stats.snapshot())
            state.stats.setdefault("phase_runtimes", {})[next_phase] = round(
                time.monotonic() - phase_started, 3)
            state.event_seq = log.last_seq
            sink.emit("info", f"phase {next_phase} completed",
                      payload={"artifacts": produced})

            if state.config.hitl == "gate_each_phase":
                state.phase = "awaiting_gate"
                state.gate_phase = next_phase
                state.save(session_dir)
                sink.emit("info", f"awaiting human gate after {next_phase}",
                          payload={"gate_phase": next_phase})
                return state
            state.save(session_dir)

        state.phase = "completed"
        sink.phase = "completed"
        sink.emit("info", "session completed", payload={"terminal": True, "outcome": "completed"})
        state.event_seq = log.last_seq
        state.save(session_dir)
        return state

    def _fail(self, state: SessionState, sink: PhaseSink, exc: Exception) -> SessionState:
        state.phase = "failed"
        state.failure = {"error": str(exc), "type": type(exc).__name__}
        sink.emit("error", f"session failed: {exc}",
                  payload={"terminal": True, "outcome": "failed",
                           "cause": type(exc).__name__})
        log = self.event_log(state.session_id)
        state.event_seq = log.last_seq
        state.save(self.session_dir(state.session_id))
        return state

    def resolve_gate(self, session_id: str, action: str, payload: dict | None = None
                     ) -> SessionState:
        state = self.load_state(session_id)
        if state.phase != "awaiting_gate":
            raise WrongState(f"session {session_id} is not awaiting a gate (phase {state.phase})")
        log = self.event_log(session_id)
        sink = PhaseSink(log, phase=state.gate_phase or state.phase)
        session_dir = self.session_dir(session_id)

        if action == "approve":
            state.gate_phase = None
            state.phase = state.next_phase() or "completed"
            if state.phase == "completed":
                sink.phase = "completed"
                sink.emit("info", "session completed",
                          payload={"terminal": True, "outcome": "completed"})
            else:
                sink.emit("info", f"gate approved; next phase {state.phase}")
            state.event_seq = log.last_seq
            state.save(session_dir)
            return state

        if action == "edit":
            if not payload or "artifact" not in payload or "content" not in payload:
                raise InvalidEdit("edit payload must carry 'artifact' and 'content'")
            name = payload["artifact"]
            if not name.startswith(f"{state.gate_phase}_"):
                raise InvalidEdit(
                    f"artifact {name!r} does not belong to gated phase {state.gate_phase!r}")
            store = self.store(session_id)
            if name not in store.names():
                raise InvalidEdit(f"unknown artifact {name!r}")
            validate_artifact(name, payload["content"])
            before = store.digest(name)
            store.write(name, payload["content"])
            after = store.digest(name)
            sink.emit("info", f"gate edit applied to {name}",
                      payload={"artifact": name, "before": before, "after": after})
            state.event_seq = log.last_seq
            state.save(session_dir)
            return state

        if action == "abort":
            state.gate_phase = None
            return self._fail(state, sink, IdeaPipeError("user_abort"))

        raise WrongState(f"unknown gate action {action!r}")

    def resume(self, session_id: str) -> SessionState:
        state = self.load_state(session_id)  # NotFound when missing
        self.store(session_id).verify_all()  # CorruptState on tampering
        if state.phase == "awaiting_gate" or not state.active:
            return state
        return self.run(session_id)
