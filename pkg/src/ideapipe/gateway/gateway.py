"""Single point of contact for chat and embedding providers.

Handles prompt rendering, retry with exponential backoff, a global
concurrent-call budget, structured-output recovery with one repair turn,
and per-session usage telemetry.
"""

from __future__ import annotations

import json
import re
import threading
import time
from dataclasses import dataclass, field

from ..errors import (
    BackendUnavailable,
    DimensionMismatch,
    EmptyInput,
    TransientBackendError,
    Truncated,
    Unparseable,
)
from .backends import ChatBackend, EmbeddingBackend, StubEmbeddingBackend
from .models import ChatRequest, ChatResponse, EmbeddingVector, normalize
from .templates import TemplateCatalog, default_catalog

_FENCE = re.compile(r"```[a-zA-Z0-9_-]*\n(.*?)```", re.DOTALL)
_IDEA_LINE = re.compile(r"^IDEA\s+(\d+)\s*:\s*(.*?)(?:[-–]\s*Score:\s*([0-9.]+)\s*/\s*5)?\s*$", re.IGNORECASE)
_CRITERION_LINE = re.compile(r"^\s*[-*]?\s*([A-Za-z][A-Za-z ]+?)\s*:\s*([0-9]+(?:\.[0-9]+)?)\s*(?:/\s*5)?\s*$")


@dataclass
class GatewayStats:
    calls: int = 0
    prompt_tokens: int = 0
    completion_tokens: int = 0
    retries: int = 0
    repairs: int = 0
    last_retry_count: int = 0
    max_in_flight: int = 0
    calls_by_agent: dict[str, int] = field(default_factory=dict)

    def snapshot(self) -> dict:
        return {
            "calls": self.calls,
            "prompt_tokens": self.prompt_tokens,
            "completion_tokens": self.completion_tokens,
            "retries": self.retries,
            "repairs": self.repairs,
            "calls_by_agent": dict(sorted(self.calls_by_agent.items())),
        }


class TokenBucket:
    """Simple token bucket; rate=None disables throttling entirely."""

    def __init__(self, rate: float | None, capacity: int = 10):
        self._rate = rate
        self._capacity = capacity
        self._tokens = float(capacity)
        self._stamp = time.monotonic()
        self._lock = threading.Lock()

    def acquire(self, sleeper=time.sleep) -> None:
        if self._rate is None:
            return
        while True:
            with self._lock:
                now = time.monotonic()
                self._tokens = min(self._capacity, self._tokens + (now - self._stamp) * self._rate)
                self._stamp = now
                if self._tokens >= 1.0:
                    self._tokens -= 1.0
                    return
                wait = (1.0 - self._tokens) / self._rate
            sleeper(wait)


class Gateway:
    """Thread-safe front door for all model traffic."""

    def __init__(
        self,
        chat_backend: ChatBackend,
        embedding_backend: EmbeddingBackend | None = None,
        *,
        catalog: TemplateCatalog | None = None,
        max_retries: int = 3,
        retry_base_delay: float = 0.5,
        concurrency_budget: int = 4,
        requests_per_second: float | None = None,
        sleeper=time.sleep,
    ):
        self._chat = chat_backend
        self._embed = embedding_backend or StubEmbeddingBackend()
        self._catalog = catalog or default_catalog()
        self._max_retries = max_retries
        self._retry_base_delay = retry_base_delay
        self._sleep = sleeper
        self._bucket = TokenBucket(requests_per_second)
        self._admission = threading.Semaphore(concurrency_budget)
        self._in_flight = 0
        self._flight_lock = threading.Lock()
        self._stats_lock = threading.Lock()
        self._embed_cache: dict[str, EmbeddingVector] = {}
        self._embed_dim: int | None = None
        self.stats = GatewayStats()

    # -- prompt surface ------------------------------------------------------

    def render_prompt(self, template_id: str, bindings: dict[str, str]) -> str:
        return self._catalog.render(template_id, bindings)

    def expected_output(self, template_id: str) -> str:
        return self._catalog.get(template_id).expected_output

    def complete(self, request: ChatRequest) -> ChatResponse:
        # Template and binding problems surface before any provider traffic.
        prompt = self.render_prompt(request.template_id, request.bindings)
        self._bucket.acquire(self._sleep)
        with self._admission:
            with self._flight_lock:
                self._in_flight += 1
                self.stats.max_in_flight = max(self.stats.max_in_flight, self._in_flight)
            try:
                reply, retries, latency_ms = self._generate_with_retries(request, prompt)
            finally:
                with self._flight_lock:
                    self._in_flight -= 1

        with self._stats_lock:
            self.stats.calls += 1
            self.stats.retries += retries
            self.stats.last_retry_count = retries
            self.stats.prompt_tokens += reply.prompt_tokens
            self.stats.completion_tokens += reply.completion_tokens
            self.stats.calls_by_agent[request.agent_tag] = (
                self.stats.calls_by_agent.get(request.agent_tag, 0) + 1
            )

        if reply.truncated:
            raise Truncated(
                f"backend truncated output for template {request.template_id!r} "
                f"({len(reply.text)} chars kept); shrink the bindings"
            )
        if not reply.text:
            raise BackendUnavailable(
                f"backend returned empty text without truncation for {request.template_id!r}"
            )
        return ChatResponse(
            text=reply.text,
            prompt_tokens=reply.prompt_tokens,
            completion_tokens=reply.completion_tokens,
            latency_ms=latency_ms,
            backend_id=self._chat.backend_id,
        )

    def _generate_with_retries(self, request: ChatRequest, prompt: str):
        retries = 0
        started = time.monotonic()
        while True:
            try:
                reply = self._chat.generate(request, prompt)
                break
            except TransientBackendError as exc:
                if retries >= self._max_retries:
                    raise BackendUnavailable(
                        f"backend failed after {retries} retries: {exc}"
                    ) from exc
                self._sleep(self._retry_base_delay * (2 ** retries))
                retries += 1
        latency_ms = int((time.monotonic() - started) * 1000)
        return reply, retries, latency_ms

    def chat(self, template_id: str, bindings: dict[str, str], *, agent_tag: str,
             temperature: float = 0.8, max_tokens: int = 32768) -> ChatResponse:
        return self.complete(ChatRequest(
            template_id=template_id,
            bindings=bindings,
            temperature=temperature,
            max_tokens=max_tokens,
            agent_tag=agent_tag,
        ))

    # -- embeddings ------------------------------------------------------------

    def embed(self, texts: list[str]) -> list[EmbeddingVector]:
        if not texts:
            raise EmptyInput("embed() requires at least one text")
        if any(not text.strip() for text in texts):
            raise EmptyInput("embed() texts must be non-blank")

        missing = [t for t in dict.fromkeys(texts) if t not in self._embed_cache]
        if missing:
            raws = self._embed.embed_batch(missing)
            for text, values in zip(missing, raws):
                if self._embed_dim is None:
                    self._embed_dim = len(values)
                elif len(values) != self._embed_dim:
                    raise DimensionMismatch(
                        f"provider changed embedding dimension {self._embed_dim} -> {len(values)}"
                    )
                self._embed_cache[text] = normalize(values, self._embed.model_id)
        return [self._embed_cache[text] for text in texts]

    # -- structured output -----------------------------------------------------

    def parse_structured(self, response: ChatResponse, expected: str, *,
                         agent_tag: str = "system"):
        """Extract the first well-formed value matching `expected`.

        Tolerates fenced code blocks and leading prose. On failure, issues a
        single repair turn asking for clean structured output, then gives up
        with Unparseable.
        """
        try:
            return self._parse(response.text, expected)
        except ValueError:
            pass
        with self._stats_lock:
            self.stats.repairs += 1
        repaired = self.complete(ChatRequest(
            template_id="repair",
            bindings={"previous_output": response.text, "expectation": expected},
            agent_tag=agent_tag,
        ))
        try:
            return self._parse(repaired.text, expected)
        except ValueError as exc:
            raise Unparseable(f"could not parse {expected} after repair attempt: {exc}") from exc

    def _parse(self, text: str, expected: str):
        if expected == "free_text":
            return text
        if expected == "json_object":
            return _extract_json_object(text)
        if expected == "delimited_list":
            return _split_delimited(text)
        if expected == "scored_lines":
            return _parse_scored_lines(text)
        raise ValueError(f"unknown expectation {expected!r}")


def _strip_fences(text: str) -> str:
    match = _FENCE.search(text)
    return match.group(1) if match else text


def _extract_json_object(text: str) -> dict:
    candidate = _strip_fences(text).strip()
    decoder = json.JSONDecoder()
    start = candidate.find("{")
    while start != -1:
        try:
            value, _ = decoder.raw_decode(candidate[start:])
        except json.JSONDecodeError:
            start = candidate.find("{", start + 1)
            continue
        if isinstance(value, dict):
            return value
        start = candidate.find("{", start + 1)
    raise ValueError("no JSON object found")


def _split_delimited(text: str) -> list[str]:
    body = _strip_fences(text).strip()
    if not body:
        return []
    if "," in body:
        parts = body.replace("\n", ",").split(",")
    else:
        parts = [line.lstrip("-* \t") for line in body.splitlines()]
    return [part.strip() for part in parts if part.strip()]


def _parse_scored_lines(text: str) -> list[dict]:
    """Blocks shaped 'IDEA k: assessment - Score: X.X/5' with per-criterion sublines."""
    body = _strip_fences(text)
    entries: list[dict] = []
    current: dict | None = None
    for line in body.splitlines():
        idea = _IDEA_LINE.match(line.strip())
        if idea:
            current = {
                "index": int(idea.group(1)),
                "assessment": idea.group(2).strip(),
                "score": float(idea.group(3)) if idea.group(3) else None,
                "criteria": {},
            }
            entries.append(current)
            continue
        if current is not None:
            criterion = _CRITERION_LINE.match(line)
            if criterion:
                current["criteria"][criterion.group(1).strip().lower()] = float(criterion.group(2))
    if not entries:
        raise ValueError("no scored idea lines found")
    return entries
