"""Minimal event-sink seam so domain modules can report progress and warnings
without depending on the orchestrator's durable log."""

from __future__ import annotations

from typing import Protocol


class EventSink(Protocol):
    def emit(self, level: str, message: str, *, agent_tag: str = "system",
             payload: dict | None = None) -> None: ...


class NullSink:
    def emit(self, level: str, message: str, *, agent_tag: str = "system",
             payload: dict | None = None) -> None:
        pass


class CollectorSink:
    """Keeps emitted events in memory; handy in tests."""

    def __init__(self):
        self.events: list[dict] = []

    def emit(self, level: str, message: str, *, agent_tag: str = "system",
             payload: dict | None = None) -> None:
        self.events.append(
            {"level": level, "message": message, "agent_tag": agent_tag, "payload": payload}
        )

    def messages(self, level: str | None = None) -> list[str]:
        return [e["message"] for e in self.events if level is None or e["level"] == level]


NULL_SINK = NullSink()
