"""Session state: the phase machine snapshot persisted beside the artifacts."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..config import PipelineConfig
from ..errors import NotFound


def atomic_write_text(path: Path, text: str) -> None:
    """Write-then-rename so concurrent readers never see a partial file."""
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)

PHASES = ("curating", "generating", "selecting", "reviewing")
TERMINAL_PHASES = ("completed", "failed")


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class SessionState:
    session_id: str
    config: PipelineConfig
    phase: str = "created"
    gate_phase: str | None = None
    completed_phases: list[str] = field(default_factory=list)
    artifact_index: dict[str, str] = field(default_factory=dict)  # name -> relative path
    started_at: str = field(default_factory=now_iso)
    updated_at: str = field(default_factory=now_iso)
    event_seq: int = 0
    rng_state: list | None = None
    stats: dict = field(default_factory=dict)
    failure: dict | None = None

    @property
    def active(self) -> bool:
        return self.phase not in TERMINAL_PHASES

    def next_phase(self) -> str | None:
        if len(self.completed_phases) >= len(PHASES):
            return None
        return PHASES[len(self.completed_phases)]

    def phase_ordinal(self) -> int:
        """0..4 progress marker: completed construction phases."""
        return len(self.completed_phases)

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "config": self.config.to_dict(),
            "phase": self.phase,
            "gate_phase": self.gate_phase,
            "completed_phases": list(self.completed_phases),
            "artifact_index": dict(self.artifact_index),
            "started_at": self.started_at,
            "updated_at": self.updated_at,
            "event_seq": self.event_seq,
            "rng_state": self.rng_state,
            "stats": self.stats,
            "failure": self.failure,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionState":
        return cls(
            session_id=data["session_id"],
            config=PipelineConfig.from_dict(data["config"]),
            phase=data["phase"],
            gate_phase=data.get("gate_phase"),
            completed_phases=list(data.get("completed_phases", [])),
            artifact_index=dict(data.get("artifact_index", {})),
            started_at=data["started_at"],
            updated_at=data["updated_at"],
            event_seq=data.get("event_seq", 0),
            rng_state=data.get("rng_state"),
            stats=data.get("stats", {}),
            failure=data.get("failure"),
        )

    def save(self, session_dir: str | Path) -> None:
        self.updated_at = now_iso()
        path = Path(session_dir) / "state.json"
        atomic_write_text(path, json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")

    @classmethod
    def load(cls, session_dir: str | Path) -> "SessionState":
        path = Path(session_dir) / "state.json"
        if not path.exists():
            raise NotFound(f"no session state at {path}")
        return cls.from_dict(json.loads(path.read_text(encoding="utf-8")))
