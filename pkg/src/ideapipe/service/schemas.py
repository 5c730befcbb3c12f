"""Request and response models for the HTTP surface."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, Field

from ..orchestrator.session import PHASES, SessionState

_SECRET_MARKERS = ("key", "secret", "token", "password")


def redact_config(config: dict) -> dict:
    return {
        name: ("***" if any(marker in name.lower() for marker in _SECRET_MARKERS) else value)
        for name, value in config.items()
    }


class CreateSessionRequest(BaseModel):
    topic: str = Field(min_length=1)
    num_ideas: int | None = Field(default=None, ge=1)
    config_overrides: dict | None = None


class GateRequest(BaseModel):
    action: Literal["approve", "edit", "abort"]
    payload: dict | None = None


class ProgressView(BaseModel):
    phase_ordinal: int
    total_phases: int = len(PHASES)
    elapsed_seconds: float


class SessionView(BaseModel):
    session_id: str
    phase: str
    gate_phase: str | None = None
    progress: ProgressView
    config: dict
    artifacts: list[str]
    stats: dict = {}
    failure: dict | None = None


def session_view(state: SessionState, elapsed_seconds: float) -> SessionView:
    return SessionView(
        session_id=state.session_id,
        phase=state.phase,
        gate_phase=state.gate_phase,
        progress=ProgressView(
            phase_ordinal=state.phase_ordinal(),
            elapsed_seconds=round(elapsed_seconds, 3),
        ),
        config=redact_config(state.config.to_dict()),
        artifacts=sorted(state.artifact_index),
        stats=state.stats,
        failure=state.failure,
    )
