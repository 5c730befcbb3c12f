"""Shared test backends and graph builders."""

from __future__ import annotations

import math

import pytest

from ideapipe.config import PipelineConfig
from ideapipe.errors import TransientBackendError
from ideapipe.gateway import Gateway, StubEmbeddingBackend
from ideapipe.gateway.backends import BackendReply
from ideapipe.kg import KnowledgeGraph

TOPIC = "Scalable and robust algorithms for the k-truss breaking problem"


class FakeChatBackend:
    """Chat backend driven by a handler(request) -> str; records every call."""

    backend_id = "fake"

    def __init__(self, handler):
        self.handler = handler
        self.calls = []

    def generate(self, request, prompt):
        self.calls.append(request)
        result = self.handler(request)
        if isinstance(result, BackendReply):
            return result
        return BackendReply(text=result, prompt_tokens=len(prompt) // 4,
                            completion_tokens=len(result) // 4)


class FlakyBackend:
    """Raises a transient failure N times, then delegates."""

    backend_id = "flaky"

    def __init__(self, failures: int, inner: FakeChatBackend):
        self.remaining = failures
        self.inner = inner

    def generate(self, request, prompt):
        if self.remaining > 0:
            self.remaining -= 1
            raise TransientBackendError("simulated 429")
        return self.inner.generate(request, prompt)


class MappedEmbeddingBackend:
    """Returns fixed vectors for chosen texts, stub vectors otherwise."""

    def __init__(self, mapping: dict[str, list[float]], dim: int = 2, seed: int = 7):
        self.mapping = mapping
        self.model_id = f"mapped:{seed}:{dim}"
        self._stub = StubEmbeddingBackend(seed, dim)

    def embed_batch(self, texts):
        out = []
        for text in texts:
            if text in self.mapping:
                out.append(list(self.mapping[text]))
            else:
                out.append(self._stub.embed_batch([text])[0][: len(next(iter(self.mapping.values())))]
                           if self.mapping else self._stub.embed_batch([text])[0])
        return out


def make_gateway(handler, *, embedding=None, max_retries=3, retry_base_delay=0.0,
                 concurrency_budget=4):
    backend = handler if hasattr(handler, "generate") else FakeChatBackend(handler)
    return Gateway(
        backend,
        embedding or StubEmbeddingBackend(7, 32),
        max_retries=max_retries,
        retry_base_delay=retry_base_delay,
        concurrency_budget=concurrency_budget,
        sleeper=lambda _: None,
    ), backend


def graph_from_edges(edges, entity_type="concept") -> KnowledgeGraph:
    """edges: iterable of (a, b) or (a, b, relation_type)."""
    graph = KnowledgeGraph()
    for edge in edges:
        a, b, *rest = edge
        relation_type = rest[0] if rest else "uses"
        graph.upsert_entity(a, entity_type, 1, "test")
        graph.upsert_entity(b, entity_type, 1, "test")
        ea = graph.entity_by_name(a)
        eb = graph.entity_by_name(b)
        graph.add_relation(ea.entity_id, eb.entity_id, relation_type, 1, "test")
    return graph


def unit(values: list[float]) -> list[float]:
    norm = math.sqrt(sum(v * v for v in values))
    return [v / norm for v in values]


def synthetic_backend_factory(config, events):
    """Offline deterministic backends that accept any bindings (so edited
    artifacts still flow through later phases, unlike strict replay)."""
    from ideapipe.gateway.synthetic import SyntheticAuthorBackend
    from ideapipe.orchestrator import BackendBundle, bundled_fixtures_path
    from ideapipe.retrieval import FixtureSearchClient

    return BackendBundle(
        chat=SyntheticAuthorBackend(1),
        embedding=StubEmbeddingBackend(config.embedding_seed, config.embedding_dim),
        search=FixtureSearchClient.from_file(bundled_fixtures_path() / "search.json",
                                             events=events),
    )


@pytest.fixture
def base_config() -> PipelineConfig:
    return PipelineConfig(topic=TOPIC)
