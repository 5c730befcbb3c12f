"""Chat and embedding backends: live HTTP providers, scripted fixture replay,
and the deterministic embedding stub used by offline runs and tests."""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx

from ..errors import BackendUnavailable, ScriptedKeyMissing, TransientBackendError
from .models import ChatRequest


@dataclass(frozen=True)
class BackendReply:
    text: str
    prompt_tokens: int
    completion_tokens: int
    truncated: bool = False


class ChatBackend(Protocol):
    backend_id: str

    def generate(self, request: ChatRequest, prompt: str) -> BackendReply: ...


def _approx_tokens(text: str) -> int:
    return (len(text) + 3) // 4


class ScriptedChatBackend:
    """Replays fixture text keyed on (template_id, hash of sorted bindings).

    A request with no fixture entry fails loudly instead of fabricating text,
    so a scripted run can never silently drift from its recording.
    """

    backend_id = "scripted"

    def __init__(self, responses: dict[str, object]):
        self._responses = dict(responses)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedChatBackend":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(data["responses"] if "responses" in data else data)

    def generate(self, request: ChatRequest, prompt: str) -> BackendReply:
        key = request.bindings_key()
        if key not in self._responses:
            raise ScriptedKeyMissing(key)
        entry = self._responses[key]
        if isinstance(entry, str):
            text, truncated = entry, False
        else:
            text, truncated = entry.get("text", ""), bool(entry.get("truncated", False))
        return BackendReply(
            text=text,
            prompt_tokens=_approx_tokens(prompt),
            completion_tokens=_approx_tokens(text),
            truncated=truncated,
        )


class RecordingChatBackend:
    """Wraps another backend and captures its replies as scripted fixtures."""

    def __init__(self, inner: ChatBackend):
        self._inner = inner
        self.recorded: dict[str, str] = {}

    @property
    def backend_id(self) -> str:
        return self._inner.backend_id

    def generate(self, request: ChatRequest, prompt: str) -> BackendReply:
        reply = self._inner.generate(request, prompt)
        self.recorded[request.bindings_key()] = reply.text
        return reply


class LiveChatBackend:
    """OpenAI-compatible chat-completions provider."""

    def __init__(self, base_url: str, api_key: str, model: str, timeout: float = 120.0):
        self.backend_id = f"live:{model}"
        self._model = model
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=timeout,
        )

    def generate(self, request: ChatRequest, prompt: str) -> BackendReply:
        try:
            response = self._client.post(
                "/chat/completions",
                json={
                    "model": self._model,
                    "messages": [{"role": "user", "content": prompt}],
                    "temperature": request.temperature,
                    "max_tokens": request.max_tokens,
                },
            )
        except httpx.HTTPError as exc:
            raise TransientBackendError(f"chat provider unreachable: {exc}") from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientBackendError(f"chat provider returned {response.status_code}")
        if response.status_code != 200:
            raise BackendUnavailable(f"chat provider returned {response.status_code}: {response.text[:200]}")
        body = response.json()
        choice = body["choices"][0]
        usage = body.get("usage", {})
        return BackendReply(
            text=choice["message"]["content"] or "",
            prompt_tokens=int(usage.get("prompt_tokens", _approx_tokens(prompt))),
            completion_tokens=int(usage.get("completion_tokens", 0)),
            truncated=choice.get("finish_reason") == "length",
        )


class EmbeddingBackend(Protocol):
    model_id: str

    def embed_batch(self, texts: list[str]) -> list[list[float]]: ...


class StubEmbeddingBackend:
    """Deterministic text-to-vector stub.

    Definition (kept stable so tests can reimplement it independently):
    seed the stdlib Mersenne Twister with the big-endian integer value of
    sha256("<seed>|<text>"), draw `dim` standard gaussians in order, and let
    the gateway normalize. Identical text always maps to the identical
    vector, and distinct texts are near-orthogonal at dim 64.
    """

    def __init__(self, seed: int = 7, dim: int = 64):
        self.seed = seed
        self.dim = dim
        self.model_id = f"stub:{seed}:{dim}"

    def embed_batch(self, texts: list[str]) -> list[list[float]]:
        return [self._vector(text) for text in texts]

    def _vector(self, text: str) -> list[float]:
        digest = hashlib.sha256(f"{self.seed}|{text}".encode("utf-8")).digest()
        rng = random.Random(int.from_bytes(digest, "big"))
        return [rng.gauss(0.0, 1.0) for _ in range(self.dim)]


class LiveEmbeddingBackend:
    """OpenAI-compatible embeddings provider."""

    def __init__(self, base_url: str, api_key: str, model: str, timeout: float = 60.0):
        self.model_id = f"live:{model}"
        self._model = model
        self._client = httpx.Client(
            base_url=base_url.rstrip("/"),
            headers={"Authorization": f"Bearer {api_key}"},
            timeout=timeout,
        )

    def embed_batch(self, texts: list[str]) -> list[list[float]]:
        try:
            response = self._client.post("/embeddings", json={"model": self._model, "input": texts})
        except httpx.HTTPError as exc:
            raise TransientBackendError(f"embedding provider unreachable: {exc}") from exc
        if response.status_code == 429 or response.status_code >= 500:
            raise TransientBackendError(f"embedding provider returned {response.status_code}")
        if response.status_code != 200:
            raise BackendUnavailable(
                f"embedding provider returned {response.status_code}: {response.text[:200]}"
            )
        rows = sorted(response.json()["data"], key=lambda item: item["index"])
        return [row["embedding"] for row in rows]
