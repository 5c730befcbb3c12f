"""Wire types for chat and embedding calls."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ChatRequest:
    template_id: str
    bindings: dict[str, str] = field(default_factory=dict)
    temperature: float = 0.8
    max_tokens: int = 32768
    agent_tag: str = "system"

    def bindings_key(self) -> str:
        """Stable request key: template id plus a hash of the sorted bindings."""
        digest = hashlib.sha256(
            json.dumps(self.bindings, sort_keys=True, ensure_ascii=False).encode("utf-8")
        ).hexdigest()[:16]
        return f"{self.template_id}:{digest}"


@dataclass(frozen=True)
class ChatResponse:
    text: str
    prompt_tokens: int = 0
    completion_tokens: int = 0
    latency_ms: int = 0
    backend_id: str = "unknown"


@dataclass(frozen=True)
class EmbeddingVector:
    values: tuple[float, ...]
    model_id: str

    def __post_init__(self):
        if not self.values:
            raise ValueError("embedding vector must be non-empty")

    @property
    def dim(self) -> int:
        return len(self.values)

    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.values))


def normalize(values: list[float] | tuple[float, ...], model_id: str) -> EmbeddingVector:
    norm = math.sqrt(sum(v * v for v in values))
    if norm == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return EmbeddingVector(tuple(v / norm for v in values), model_id)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Dot product of two unit vectors from the same embedding model."""
    from ..errors import DimensionMismatch

    if a.model_id != b.model_id or a.dim != b.dim:
        raise DimensionMismatch(
            f"cannot compare {a.model_id!r}[{a.dim}] with {b.model_id!r}[{b.dim}]"
        )
    return sum(x * y for x, y in zip(a.values, b.values))


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    body: str
    expected_output: str  # free_text | json_object | delimited_list | scored_lines
