"""Literature-informed planning: gap analysis plus facet decomposition."""

from __future__ import annotations

import re

from ..errors import InvalidPlanError
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from ..kg.builder import sample_top_degree
from ..kg.model import KnowledgeGraph
from ..retrieval.models import PaperRecord
from .models import ResearchPlan
from .parsing import parse_facets, word_count

AGENT = "planner"

_GAP_LINE = re.compile(r"^\s*(?:[-*]\s*)?(?:GAP\s*\d+\s*:\s*)?(.+?)\s*$", re.IGNORECASE)

MIN_GAPS = 3
MAX_GAPS = 5


def _knowledge_context(entities, papers: list[PaperRecord]) -> str:
    entity_lines = "\n".join(
        f"- {e.name} ({e.entity_type}, degree signal rank {i + 1})"
        for i, e in enumerate(entities)
    )
    paper_lines = "\n".join(
        f"- [{p.paper_id}] {p.title} ({p.year}, {p.citation_count} citations): "
        f"{p.abstract[:400]}"
        for p in papers
    )
    return f"Key entities:\n{entity_lines}\n\nMost relevant papers:\n{paper_lines}"


def _parse_gaps(text: str) -> list[str]:
    gaps = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped:
            continue
        if not re.match(r"^(?:[-*]|GAP\s*\d+\s*:)", stripped, re.IGNORECASE):
            continue
        match = _GAP_LINE.match(stripped.lstrip("-* "))
        if match and match.group(1).strip():
            gaps.append(match.group(1).strip())
    return gaps


def plan(
    gateway: Gateway,
    graph: KnowledgeGraph,
    papers: list[PaperRecord],
    topic: str,
    *,
    top_entities: int = 20,
    top_papers: int = 5,
    word_floors: tuple[int, int, int] = (400, 500, 400),
    events: EventSink = NULL_SINK,
) -> ResearchPlan:
    """Build the research blueprint from the graph hubs and the best papers.

    Gap analysis yields 3-5 limitation statements (clamped from above,
    retried once from below). Facets get one re-prompt if a word floor is
    missed, then pass with a warning.
    """
    if not papers:
        raise InvalidPlanError("planning needs at least one retrieved paper")
    entities = sample_top_degree(graph, top_entities)
    context = _knowledge_context(entities, papers[:top_papers])

    gaps: list[str] = []
    for attempt in (1, 2):
        response = gateway.chat("gap_analysis", {"topic": topic, "knowledge_context": context},
                                agent_tag=AGENT)
        gaps = _parse_gaps(response.text)
        if len(gaps) >= MIN_GAPS:
            break
        if attempt == 1:
            events.emit("warning", f"gap analysis returned {len(gaps)} gaps, retrying",
                        agent_tag=AGENT)
    if len(gaps) < MIN_GAPS:
        raise InvalidPlanError(f"gap analysis produced {len(gaps)} gaps, need >= {MIN_GAPS}")
    if len(gaps) > MAX_GAPS:
        events.emit("warning", f"clamped {len(gaps)} gaps to {MAX_GAPS}", agent_tag=AGENT)
        gaps = gaps[:MAX_GAPS]

    facets = None
    for attempt in (1, 2):
        response = gateway.chat(
            "facet_decomposition",
            {"seed_topic": topic, "knowledge_context": context},
            agent_tag=AGENT,
        )
        facets = parse_facets(response.text)
        if facets is None:
            if attempt == 1:
                events.emit("warning", "facet decomposition missing sections, retrying",
                            agent_tag=AGENT)
                continue
            raise InvalidPlanError("facet decomposition never produced all three facets")
        counts = (
            word_count(facets.problem_statement),
            word_count(facets.proposed_methodology),
            word_count(facets.experimental_validation),
        )
        if all(count >= floor for count, floor in zip(counts, word_floors)):
            break
        if attempt == 1:
            events.emit("warning",
                        f"facet word counts {counts} below floors {word_floors}, re-prompting",
                        agent_tag=AGENT)
        else:
            events.emit("warning",
                        f"accepting facets below word floors after retry: {counts}",
                        agent_tag=AGENT)

    return ResearchPlan(
        gaps=tuple(gaps),
        facets=facets,
        context_digest={
            "entities": [e.name for e in entities],
            "papers": [p.paper_id for p in papers[:top_papers]],
        },
    )
