"""Multi-strategy variant generation and draft-pool deduplication."""

from __future__ import annotations

from ..errors import IdeaPipeError, SelfPollination
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway, cosine
from ..kg.model import KnowledgeGraph
from .models import IdeaFacets, IdeaIdAllocator, ReasoningPath, ResearchIdea, ResearchPlan
from .parsing import parse_idea_sections

AGENT = "idea_generator"

DIVERSIFICATION_HINTS = (
    "push toward a fundamentally different algorithmic paradigm",
    "target an unconventional application domain",
    "prioritize theoretical guarantees over empirical performance",
    "optimize for extreme scale and distributed execution",
    "center the idea on data efficiency and weak supervision",
    "design for adversarial or failure-heavy conditions",
    "emphasize interpretability and human oversight",
    "recast the problem in an online or streaming setting",
)


def _idea_from_sections(text: str, allocator: IdeaIdAllocator, *, strategy: str,
                        lineage: tuple[str, ...] = (),
                        supporting: tuple[str, ...] = ()) -> ResearchIdea | None:
    sections = parse_idea_sections(text)
    facets = IdeaFacets(
        sections.get("problem_statement", ""),
        sections.get("proposed_methodology", ""),
        sections.get("experimental_validation", ""),
    )
    if not facets.non_blank():
        return None
    return ResearchIdea(
        idea_id=allocator.next(),
        title=sections.get("title", "").strip() or "Untitled idea",
        facets=facets,
        strategy=strategy,
        lineage=lineage,
        supporting_papers=supporting,
    )


def render_path(path: ReasoningPath, graph: KnowledgeGraph) -> str:
    pieces = [graph.entities[path.nodes[0]].name]
    for node, edge_type in zip(path.nodes[1:], path.edge_types):
        pieces.append(f"-[{edge_type}]-> {graph.entities[node].name}")
    return " ".join(pieces)


def cross_pollinate(gateway: Gateway, idea1: ResearchIdea, idea2: ResearchIdea,
                    connectors: list[str], allocator: IdeaIdAllocator, *,
                    supporting: tuple[str, ...] = ()) -> ResearchIdea | None:
    """Synthesize a hybrid of two distinct parents, guided by graph connectors."""
    if idea1.idea_id == idea2.idea_id:
        raise SelfPollination(f"cannot cross idea {idea1.idea_id} with itself")
    response = gateway.chat(
        "cross_pollination",
        {
            "idea1": idea1.rendered(),
            "idea2": idea2.rendered(),
            "cross_connections": "\n".join(connectors) if connectors else "none",
        },
        agent_tag="cross_pollination",
    )
    return _idea_from_sections(
        response.text, allocator, strategy="cross",
        lineage=(idea1.idea_id, idea2.idea_id), supporting=supporting,
    )


def generate_variants(
    gateway: Gateway,
    plan: ResearchPlan,
    paths: list[ReasoningPath],
    graph: KnowledgeGraph,
    target: int,
    *,
    alpha: int = 10,
    allocator: IdeaIdAllocator | None = None,
    connectors: list[str] | None = None,
    supporting: tuple[str, ...] = (),
    semantic_threshold: float = 0.92,
    raw_sink: list | None = None,
    events: EventSink = NULL_SINK,
) -> list[ResearchIdea]:
    """Over-generate alpha*target drafts, split round-robin base/got/cross.

    Cross drafts run last over the drafts already produced. The returned
    pool is deduplicated (exact string, then embedding similarity), so it
    may be smaller than alpha*target.
    """
    assert target >= 1
    allocator = allocator or IdeaIdAllocator()
    total = alpha * target
    strategy_order = [("base", "got", "cross")[i % 3] for i in range(total)]
    counts = {name: strategy_order.count(name) for name in ("base", "got", "cross")}

    drafts: list[ResearchIdea] = []

    plan_bindings = {
        "problem_statement": plan.facets.problem_statement,
        "proposed_methodology": plan.facets.proposed_methodology,
        "experimental_validation": plan.facets.experimental_validation,
    }

    for j in range(counts["base"]):
        try:
            response = gateway.chat(
                "idea_variant_base",
                {
                    **plan_bindings,
                    "variant_index": str(j + 1),
                    "variant_hint": DIVERSIFICATION_HINTS[j % len(DIVERSIFICATION_HINTS)],
                },
                agent_tag=AGENT,
            )
        except IdeaPipeError as exc:
            events.emit("warning", f"base variant {j + 1} failed: {exc}", agent_tag=AGENT)
            continue
        idea = _idea_from_sections(response.text, allocator, strategy="base",
                                   supporting=supporting)
        if idea is None:
            events.emit("warning", f"base variant {j + 1} had unusable sections", agent_tag=AGENT)
        else:
            drafts.append(idea)

    ranked_paths = sorted(paths, key=lambda p: (-p.total, p.path_id))
    if not ranked_paths and counts["got"]:
        events.emit("warning", "no reasoning paths available; skipping graph-walk variants",
                    agent_tag=AGENT)
    else:
        for j in range(counts["got"]):
            path = ranked_paths[j % len(ranked_paths)]
            try:
                response = gateway.chat(
                    "idea_variant_got",
                    {**plan_bindings, "reasoning_path": render_path(path, graph)},
                    agent_tag=AGENT,
                )
            except IdeaPipeError as exc:
                events.emit("warning", f"graph-walk variant {j + 1} failed: {exc}",
                            agent_tag=AGENT)
                continue
            idea = _idea_from_sections(response.text, allocator, strategy="got",
                                       lineage=(path.path_id,), supporting=supporting)
            if idea is None:
                events.emit("warning", f"graph-walk variant {j + 1} had unusable sections",
                            agent_tag=AGENT)
            else:
                drafts.append(idea)

    parents = list(drafts)
    if len(parents) < 2 and counts["cross"]:
        events.emit("warning", "fewer than two parents; skipping cross-pollination",
                    agent_tag=AGENT)
    else:
        for j in range(counts["cross"]):
            first = parents[(2 * j) % len(parents)]
            second = parents[(2 * j + 1) % len(parents)]
            if first.idea_id == second.idea_id:
                second = parents[(2 * j + 2) % len(parents)]
            if first.idea_id == second.idea_id:
                break
            try:
                idea = cross_pollinate(gateway, first, second, connectors or [],
                                       allocator, supporting=supporting)
            except IdeaPipeError as exc:
                events.emit("warning", f"cross variant {j + 1} failed: {exc}", agent_tag=AGENT)
                continue
            if idea is None:
                events.emit("warning", f"cross variant {j + 1} had unusable sections",
                            agent_tag=AGENT)
            else:
                drafts.append(idea)

    if raw_sink is not None:
        raw_sink.extend(drafts)
    return dedupe_drafts(gateway, drafts, semantic_threshold=semantic_threshold, events=events)


def dedupe_drafts(gateway: Gateway, drafts: list[ResearchIdea], *,
                  semantic_threshold: float = 0.92,
                  events: EventSink = NULL_SINK) -> list[ResearchIdea]:
    """Drop exact-normalized duplicates, then embedding near-duplicates.

    The earlier draft always survives.
    """
    survivors: list[ResearchIdea] = []
    seen_normalized: set[str] = set()
    for idea in drafts:
        normalized = " ".join(idea.facets.combined().casefold().split())
        if normalized in seen_normalized:
            events.emit("info", f"dropped exact duplicate draft {idea.idea_id}", agent_tag=AGENT)
            continue
        seen_normalized.add(normalized)
        survivors.append(idea)

    if len(survivors) < 2:
        return survivors
    vectors = gateway.embed([idea.facets.combined() for idea in survivors])
    kept: list[ResearchIdea] = []
    kept_vectors = []
    for idea, vector in zip(survivors, vectors):
        duplicate_of = None
        for other, other_vector in zip(kept, kept_vectors):
            if cosine(vector, other_vector) > semantic_threshold:
                duplicate_of = other
                break
        if duplicate_of is None:
            kept.append(idea)
            kept_vectors.append(vector)
        else:
            events.emit("info",
                        f"dropped semantic duplicate {idea.idea_id} of {duplicate_of.idea_id}",
                        agent_tag=AGENT)
    return kept
