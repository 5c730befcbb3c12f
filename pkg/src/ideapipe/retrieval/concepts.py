"""Topic decomposition and combinatorial query planning."""

from __future__ import annotations

from itertools import combinations

from ..errors import TooFewConcepts
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from .models import Concept, QueryPlan

MAX_CONCEPTS = 15
MIN_CONCEPTS = 3
AGENT = "knowledge_grounding"


def decompose_topic(gateway: Gateway, seed: str, *, events: EventSink = NULL_SINK) -> list[Concept]:
    """Ask the model to split a seed topic into ranked searchable concepts.

    The reply is a comma-separated list ordered fundamentals-first; it is
    trimmed, lowercased, deduplicated, and clamped to 15 entries. Fewer than
    3 usable concepts triggers one retry before giving up.
    """
    if not seed.strip():
        raise TooFewConcepts("seed topic is blank")

    for attempt in (1, 2):
        response = gateway.chat("topic_decomposition", {"topic": seed}, agent_tag=AGENT)
        phrases = gateway.parse_structured(response, "delimited_list", agent_tag=AGENT)
        seen: list[str] = []
        for phrase in phrases:
            cleaned = phrase.strip().lower()
            if cleaned and cleaned not in seen:
                seen.append(cleaned)
        if len(seen) >= MIN_CONCEPTS:
            if len(seen) > MAX_CONCEPTS:
                events.emit("warning", f"clamped {len(seen)} concepts to {MAX_CONCEPTS}",
                            agent_tag=AGENT)
                seen = seen[:MAX_CONCEPTS]
            return [Concept(text=text, rank=i + 1) for i, text in enumerate(seen)]
        if attempt == 1:
            events.emit("warning", f"only {len(seen)} concepts parsed, retrying decomposition",
                        agent_tag=AGENT)
    raise TooFewConcepts(f"decomposition produced {len(seen)} concepts, need >= {MIN_CONCEPTS}")


def build_query_plan(concepts: list[Concept], *, cap: int = 40) -> QueryPlan:
    """All singles, then pairs, then triples, fundamentals first, capped."""
    if not concepts:
        raise ValueError("need at least one concept")
    ordered = sorted(concepts, key=lambda c: c.rank)
    texts = [c.text for c in ordered]

    queries: list[str] = []
    tags: list[str] = []
    for text in texts:
        queries.append(text)
        tags.append("single")
    for a, b in combinations(texts, 2):
        queries.append(f"{a} {b}")
        tags.append("pair")
    for a, b, c in combinations(texts, 3):
        queries.append(f"{a} {b} {c}")
        tags.append("tuple")

    deduped: list[tuple[str, str]] = []
    seen: set[str] = set()
    for query, tag in zip(queries, tags):
        if query not in seen:
            seen.add(query)
            deduped.append((query, tag))
    deduped = deduped[:cap]
    return QueryPlan(
        queries=tuple(q for q, _ in deduped),
        granularities=tuple(t for _, t in deduped),
    )
