from .events import EventLog, LogEvent, PhaseSink
from .pipeline import (
    BackendBundle,
    Orchestrator,
    bundled_fixtures_path,
    default_backend_factory,
)
from .session import PHASES, SessionState
from .store import ArtifactStore, canonical_json, validate_artifact

__all__ = [
    "ArtifactStore",
    "BackendBundle",
    "EventLog",
    "LogEvent",
    "Orchestrator",
    "PHASES",
    "PhaseSink",
    "SessionState",
    "bundled_fixtures_path",
    "canonical_json",
    "default_backend_factory",
    "validate_artifact",
]
