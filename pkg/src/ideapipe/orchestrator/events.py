"""Durable, strictly ordered per-session event log with live fan-out."""

from __future__ import annotations

import json
import queue
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path


@dataclass(frozen=True)
class LogEvent:
    seq: int
    timestamp: str
    phase: str
    agent_tag: str
    level: str  # info | warning | error
    message: str
    payload: dict | None = None

    def to_dict(self) -> dict:
        data = {
            "seq": self.seq,
            "timestamp": self.timestamp,
            "phase": self.phase,
            "agent_tag": self.agent_tag,
            "level": self.level,
            "message": self.message,
        }
        if self.payload is not None:
            data["payload"] = self.payload
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "LogEvent":
        return cls(
            seq=data["seq"],
            timestamp=data["timestamp"],
            phase=data["phase"],
            agent_tag=data["agent_tag"],
            level=data["level"],
            message=data["message"],
            payload=data.get("payload"),
        )

    @property
    def terminal(self) -> bool:
        return bool(self.payload and self.payload.get("terminal"))


class EventLog:
    """Appending owner for one session's log.

    Emission is serialized under a lock, so sequence numbers are gap-free
    and strictly increasing no matter how many threads emit. Subscribers
    receive every event at or after their attach point exactly once.
    """

    def __init__(self, path: str | Path):
        self._path = Path(path)
        self._lock = threading.Lock()
        self._events: list[LogEvent] = []
        self._subscribers: list[queue.SimpleQueue] = []
        if self._path.exists():
            for line in self._path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    self._events.append(LogEvent.from_dict(json.loads(line)))
        self._seq = self._events[-1].seq if self._events else 0
        self._path.parent.mkdir(parents=True, exist_ok=True)
        self._file = self._path.open("a", encoding="utf-8")

    @property
    def last_seq(self) -> int:
        with self._lock:
            return self._seq

    def emit(self, *, phase: str, agent_tag: str, level: str, message: str,
             payload: dict | None = None) -> LogEvent:
        with self._lock:
            self._seq += 1
            event = LogEvent(
                seq=self._seq,
                timestamp=datetime.now(timezone.utc).isoformat(),
                phase=phase,
                agent_tag=agent_tag,
                level=level,
                message=message,
                payload=payload,
            )
            self._events.append(event)
            self._file.write(json.dumps(event.to_dict(), ensure_ascii=False) + "\n")
            self._file.flush()
            for subscriber in self._subscribers:
                subscriber.put(event)
            return event

    def events_since(self, seq: int) -> list[LogEvent]:
        with self._lock:
            return [event for event in self._events if event.seq > seq]

    def subscribe(self, from_seq: int = 0) -> tuple[list[LogEvent], queue.SimpleQueue]:
        """Atomically returns the replay suffix and a live queue for what follows."""
        with self._lock:
            replay = [event for event in self._events if event.seq > from_seq]
            live: queue.SimpleQueue = queue.SimpleQueue()
            self._subscribers.append(live)
            return replay, live

    def unsubscribe(self, live: queue.SimpleQueue) -> None:
        with self._lock:
            if live in self._subscribers:
                self._subscribers.remove(live)

    def close(self) -> None:
        with self._lock:
            self._file.close()


class PhaseSink:
    """EventSink adapter that stamps the orchestrator's current phase."""

    def __init__(self, log: EventLog, phase: str = "created"):
        self._log = log
        self.phase = phase

    def emit(self, level: str, message: str, *, agent_tag: str = "orchestrator",
             payload: dict | None = None) -> LogEvent:
        return self._log.emit(phase=self.phase, agent_tag=agent_tag, level=level,
                              message=message, payload=payload)
