"""Four-phase graph construction: core seeding, literature enrichment,
degree-based expansion, and relation-only enhancement."""

from __future__ import annotations

import random

from ..errors import IdeaPipeError
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from ..retrieval.models import PaperRecord
from .extraction import parse_extraction
from .model import KnowledgeGraph, ParsedEntity, ParsedRelation

AGENT = "kg_builder"


def merge_extraction(
    graph: KnowledgeGraph,
    entities: list[ParsedEntity],
    relations: list[ParsedRelation],
    *,
    phase: int,
    source_id: str,
    allow_new_entities: bool = True,
    events: EventSink = NULL_SINK,
) -> tuple[int, int]:
    """Apply a parsed extraction; returns (entities added, relations added).

    With allow_new_entities=False (construction phase 4), proposed entities
    are discarded and relations keep only endpoints already in the graph.
    """
    entities_added = 0
    for parsed in entities:
        if allow_new_entities:
            _, created = graph.upsert_entity(parsed.name, parsed.entity_type, phase, source_id)
            entities_added += int(created)
        elif graph.entity_by_name(parsed.name) is None:
            events.emit("warning",
                        f"phase {phase} may not add entities; discarded {parsed.name!r}",
                        agent_tag=AGENT)

    relations_added = 0
    for parsed in relations:
        source = graph.entity_by_name(parsed.source)
        target = graph.entity_by_name(parsed.target)
        if source is None or target is None:
            events.emit("warning",
                        f"dropped relation to unknown entity: "
                        f"{parsed.source!r} -{parsed.relation_type}-> {parsed.target!r}",
                        agent_tag=AGENT)
            continue
        if source.entity_id == target.entity_id:
            continue
        _, created = graph.add_relation(source.entity_id, target.entity_id,
                                        parsed.relation_type, phase, source_id)
        relations_added += int(created)
    return entities_added, relations_added


def seed_core(gateway: Gateway, graph: KnowledgeGraph, topic: str, *,
              events: EventSink = NULL_SINK) -> tuple[int, int]:
    """Phase 1: seed the conceptual backbone from the topic alone."""
    response = gateway.chat("kg_core_concepts", {"seed_topic": topic}, agent_tag=AGENT)
    entities, relations = parse_extraction(response.text, events=events)
    added = merge_extraction(graph, entities, relations, phase=1, source_id="topic", events=events)
    graph.log_phase(1, *added)
    events.emit("info", f"seeded graph core: +{added[0]} entities, +{added[1]} relations",
                agent_tag=AGENT)
    return added


def enrich_batch(gateway: Gateway, graph: KnowledgeGraph, papers: list[PaperRecord], *,
                 batch_size: int = 3, events: EventSink = NULL_SINK) -> tuple[int, int]:
    """Phase 2: mini-batch enrichment over retrieved abstracts and keywords."""
    total_entities = 0
    total_relations = 0
    for start in range(0, len(papers), batch_size):
        batch = papers[start:start + batch_size]
        batch_text = "\n\n".join(
            f"Paper {p.paper_id}\nTitle: {p.title}\nAbstract: {p.abstract}\n"
            f"Keywords: {', '.join(p.keywords) if p.keywords else 'n/a'}"
            for p in batch
        )
        source_id = "+".join(p.paper_id for p in batch)
        try:
            response = gateway.chat("kg_enrichment", {"literature_batch": batch_text},
                                    agent_tag=AGENT)
        except IdeaPipeError as exc:
            events.emit("warning", f"enrichment batch {source_id} failed: {exc}", agent_tag=AGENT)
            continue
        entities, relations = parse_extraction(response.text, events=events)
        added = merge_extraction(graph, entities, relations, phase=2, source_id=source_id,
                                 events=events)
        total_entities += added[0]
        total_relations += added[1]
    graph.log_phase(2, total_entities, total_relations)
    events.emit("info",
                f"enriched graph from {len(papers)} papers: "
                f"+{total_entities} entities, +{total_relations} relations",
                agent_tag=AGENT)
    return total_entities, total_relations


def sample_top_degree(graph: KnowledgeGraph, k: int) -> list:
    """k highest-degree entities; ties break on canonical name ascending."""
    graph.require_non_empty()
    ranked = sorted(graph.entities.values(),
                    key=lambda e: (-graph.degree(e.entity_id), e.canonical))
    return ranked[:min(k, len(ranked))]


def expand_degree(gateway: Gateway, graph: KnowledgeGraph, *, k: int = 10,
                  events: EventSink = NULL_SINK) -> tuple[int, int]:
    """Phase 3: mine adjacent or emerging concepts around the top-degree hubs."""
    hubs = sample_top_degree(graph, k)
    total_entities = 0
    total_relations = 0
    for hub in hubs:
        neighbor_names = sorted(
            graph.entities[neighbor_id].name for neighbor_id in graph.neighbors(hub.entity_id)
        )
        neighborhood = "\n".join(f"- {name}" for name in neighbor_names) or "(isolated)"
        try:
            response = gateway.chat(
                "kg_expansion",
                {"hub_name": hub.name, "neighborhood": neighborhood},
                agent_tag=AGENT,
            )
        except IdeaPipeError as exc:
            events.emit("warning", f"expansion of hub {hub.name!r} failed: {exc}", agent_tag=AGENT)
            continue
        entities, relations = parse_extraction(response.text, events=events)
        added = merge_extraction(graph, entities, relations, phase=3,
                                 source_id=f"hub:{hub.entity_id}", events=events)
        total_entities += added[0]
        total_relations += added[1]
    graph.log_phase(3, total_entities, total_relations)
    events.emit("info",
                f"expanded {len(hubs)} hubs: +{total_entities} entities, "
                f"+{total_relations} relations", agent_tag=AGENT)
    return total_entities, total_relations


def enhance_relations(gateway: Gateway, graph: KnowledgeGraph, rng: random.Random, *,
                      sample_size: int = 20, top_fraction: float = 0.6,
                      iterations: int = 2, events: EventSink = NULL_SINK) -> int:
    """Phase 4: probe latent relations over a hybrid top-degree/random sample.

    Never introduces entities; extraction lines naming unknown entities are
    dropped with a warning.
    """
    graph.require_non_empty()
    relations_added = 0
    for iteration in range(1, iterations + 1):
        n_top = min(round(top_fraction * sample_size), len(graph.entities))
        top = sample_top_degree(graph, n_top)
        top_ids = {e.entity_id for e in top}
        rest = sorted(
            (e for e in graph.entities.values() if e.entity_id not in top_ids),
            key=lambda e: e.canonical,
        )
        n_random = min(sample_size - n_top, len(rest))
        sample = top + (rng.sample(rest, n_random) if n_random > 0 else [])

        entity_list = "\n".join(f"- {e.name} (type: {e.entity_type})" for e in sample)
        try:
            response = gateway.chat("kg_relation_enhancement", {"entity_list": entity_list},
                                    agent_tag=AGENT)
        except IdeaPipeError as exc:
            events.emit("warning", f"enhancement iteration {iteration} failed: {exc}",
                        agent_tag=AGENT)
            continue
        entities, relations = parse_extraction(response.text, events=events)
        _, added = merge_extraction(graph, entities, relations, phase=4,
                                    source_id=f"enhance:{iteration}",
                                    allow_new_entities=False, events=events)
        relations_added += added
    graph.log_phase(4, 0, relations_added)
    events.emit("info", f"relation enhancement added {relations_added} relations",
                agent_tag=AGENT)
    return relations_added
