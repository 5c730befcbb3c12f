"""The four pipeline phases, expressed over the artifact store.

Each phase loads its inputs from persisted artifacts (never from memory
carried across phases), which is what makes gate edits and resume work: the
artifact on disk is the single source of truth between phases.
"""

from __future__ import annotations

import random
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..config import PipelineConfig
from ..errors import Unparseable
from ..gateway import Gateway
from ..ideation import (
    IdeaIdAllocator,
    PathWeights,
    ReasoningPath,
    ResearchIdea,
    ResearchPlan,
    critique,
    generate_variants,
    link_bridges,
    plan as build_plan,
    refine,
    sample_got_paths,
)
from ..kg import (
    KnowledgeGraph,
    enhance_relations,
    enrich_batch,
    expand_degree,
    sample_top_degree,
    seed_core,
)
from ..retrieval import (
    PaperRecord,
    SearchClient,
    build_query_plan,
    decompose_topic,
    dedupe_and_rank,
)
from ..review import aggregate, assess_novelty, build_portfolio, review_idea
from ..selection import (
    attach_scores,
    external_filter,
    merge_similar,
    reduce_pool,
    score_internal,
)
from .events import PhaseSink
from .store import ArtifactStore


@dataclass
class PhaseRuntime:
    config: PipelineConfig
    store: ArtifactStore
    sink: PhaseSink
    gateway: Gateway
    search: SearchClient
    rng: random.Random


def phase_curating(rt: PhaseRuntime) -> None:
    config = rt.config
    concepts = decompose_topic(rt.gateway, config.topic, events=rt.sink)
    rt.sink.emit("info", f"decomposed topic into {len(concepts)} concepts",
                 agent_tag="knowledge_grounding")

    query_plan = build_query_plan(concepts, cap=config.query_cap)
    raw_papers: list[PaperRecord] = []
    for query in query_plan.queries:
        hits = rt.search.search(query, config.search_limit_per_query)
        raw_papers.extend(hits)
    rt.sink.emit("info",
                 f"ran {len(query_plan.queries)} queries, {len(raw_papers)} raw hits",
                 agent_tag="knowledge_grounding")

    papers = dedupe_and_rank(
        rt.gateway, raw_papers, config.topic, n=config.papers_per_run,
        near_duplicate_cosine=config.near_duplicate_title_cosine,
        min_relevance=config.min_relevance, events=rt.sink,
    )
    rt.sink.emit("info", f"ranked literature pool holds {len(papers)} papers",
                 agent_tag="knowledge_grounding")
    rt.store.write("curating_papers", {
        "concepts": [{"text": c.text, "rank": c.rank} for c in concepts],
        "queries": [
            {"query": q, "granularity": g}
            for q, g in zip(query_plan.queries, query_plan.granularities)
        ],
        "papers": [p.to_dict() for p in papers],
    })

    graph = KnowledgeGraph()
    seed_core(rt.gateway, graph, config.topic, events=rt.sink)
    rt.store.write("curating_graph_phase1", graph.to_dict())
    enrich_batch(rt.gateway, graph, papers, batch_size=config.kg_batch_size, events=rt.sink)
    rt.store.write("curating_graph_phase2", graph.to_dict())
    expand_degree(rt.gateway, graph, k=config.kg_expand_k, events=rt.sink)
    rt.store.write("curating_graph_phase3", graph.to_dict())
    enhance_relations(
        rt.gateway, graph, rt.rng,
        sample_size=config.kg_enhance_sample,
        top_fraction=config.kg_enhance_top_fraction,
        iterations=config.kg_enhance_iterations,
        events=rt.sink,
    )
    rt.store.write("curating_graph_phase4", graph.to_dict())
    graph.validate()


def _load_papers(rt: PhaseRuntime) -> list[PaperRecord]:
    return [PaperRecord.from_dict(item) for item in rt.store.read("curating_papers")["papers"]]


def _load_graph(rt: PhaseRuntime) -> KnowledgeGraph:
    return KnowledgeGraph.from_dict(rt.store.read("curating_graph_phase4"))


def _cross_connectors(graph: KnowledgeGraph, limit: int = 3) -> list[str]:
    """Relations among the top-degree hubs, rendered for the hybrid prompt."""
    hubs = {e.entity_id for e in sample_top_degree(graph, 10)} if len(graph) else set()
    connectors = []
    for relation in sorted(graph.relations.values(), key=lambda r: r.relation_id):
        if relation.source in hubs and relation.target in hubs:
            connectors.append(
                f"{graph.entities[relation.source].name} "
                f"-[{relation.relation_type}]-> {graph.entities[relation.target].name}"
            )
        if len(connectors) >= limit:
            break
    return connectors


def phase_generating(rt: PhaseRuntime) -> None:
    config = rt.config
    papers = _load_papers(rt)
    graph = _load_graph(rt)

    research_plan = build_plan(
        rt.gateway, graph, papers, config.topic,
        top_entities=config.planner_top_entities,
        top_papers=config.planner_top_papers,
        word_floors=config.facet_word_floors,
        events=rt.sink,
    )
    rt.store.write("generating_plan", research_plan.to_dict())
    rt.sink.emit("info", f"plan ready with {len(research_plan.gaps)} gaps", agent_tag="planner")

    weights = PathWeights(
        node_quality=config.path_weight_node_quality,
        edge_diversity=config.path_weight_edge_diversity,
        length=config.path_weight_length,
    )
    paths = sample_got_paths(
        graph, rt.rng,
        max_paths=config.got_max_paths,
        max_anchor_entities=config.got_max_anchor_entities,
        start_nodes=config.got_start_nodes,
        branching=config.got_branching,
        depth=config.got_depth,
        min_score=config.got_min_path_score,
        weights=weights,
        events=rt.sink,
    )
    bridges = link_bridges(research_plan, paths, graph, per_facet=config.got_bridges_per_facet)
    rt.store.write("generating_paths", {
        "paths": [p.to_dict() for p in paths],
        "bridges": bridges,
    })
    rt.sink.emit("info", f"sampled {len(paths)} reasoning paths", agent_tag="got")

    supporting = tuple(p.paper_id for p in papers[:3])
    raw_drafts: list[ResearchIdea] = []
    drafts = generate_variants(
        rt.gateway, research_plan, paths, graph, config.num_ideas,
        alpha=config.overgeneration_factor,
        allocator=IdeaIdAllocator(),
        connectors=_cross_connectors(graph),
        supporting=supporting,
        semantic_threshold=config.semantic_duplicate_cosine,
        raw_sink=raw_drafts,
        events=rt.sink,
    )
    rt.store.write("generating_ideas_draft", [idea.to_dict() for idea in raw_drafts])
    rt.store.write("generating_ideas_deduped", [idea.to_dict() for idea in drafts])
    rt.sink.emit("info",
                 f"generated {len(raw_drafts)} drafts, {len(drafts)} after deduplication",
                 agent_tag="idea_generator")

    refined: list[ResearchIdea] = []
    for idea in drafts:
        verdict = critique(rt.gateway, idea, events=rt.sink)
        idea = refine(rt.gateway, idea, verdict, 1, events=rt.sink)
        idea = refine(rt.gateway, idea, verdict, 2,
                      validation_components=config.validation_components, events=rt.sink)
        refined.append(idea.with_status("refined"))
    rt.store.write("generating_ideas_refined", [idea.to_dict() for idea in refined])
    rt.sink.emit("info", f"refinement finished for {len(refined)} ideas",
                 agent_tag="idea_exploration")


def _next_idea_number(ideas: list[ResearchIdea]) -> int:
    numbers = [0]
    for idea in ideas:
        match = re.fullmatch(r"idea-(\d+)", idea.idea_id)
        if match:
            numbers.append(int(match.group(1)))
    return max(numbers)


def phase_selecting(rt: PhaseRuntime) -> None:
    config = rt.config
    ideas = [ResearchIdea.from_dict(item) for item in rt.store.read("generating_ideas_refined")]
    papers = _load_papers(rt)

    scores = score_internal(rt.gateway, ideas, batch_size=config.internal_batch_size,
                            events=rt.sink)
    ideas = attach_scores(ideas, scores)

    merged, genealogy = merge_similar(
        rt.gateway, ideas,
        threshold=config.merge_jaccard_threshold,
        max_iters=config.merge_max_iterations,
        allocator=IdeaIdAllocator(start=_next_idea_number(ideas)),
        events=rt.sink,
    )
    if genealogy:
        rt.sink.emit("info", f"merged {len(genealogy)} similar idea pairs",
                     agent_tag="internal_selection")

    reduced = reduce_pool(merged, config.num_ideas, multiplier=config.selection_multiplier)
    rt.sink.emit("info", f"pool reduced to {len(reduced)} ideas", agent_tag="internal_selection")

    retained, rejected, verdicts = external_filter(
        rt.gateway, reduced, papers, cutoff=config.external_similarity_cutoff, events=rt.sink,
    )
    if not retained:
        rt.sink.emit("warning",
                     "external filter rejected every idea; falling back to the least similar",
                     agent_tag="external_selection")
        fallback = sorted(reduced,
                          key=lambda idea: (verdicts[idea.idea_id].max_similarity, idea.idea_id))
        retained = fallback[:config.num_ideas]
    retained_ids = {idea.idea_id for idea in retained}

    rt.store.write("selecting_selection", {
        "scores": {idea_id: s.to_dict() for idea_id, s in sorted(scores.items())},
        "merge_genealogy": genealogy,
        "verdicts": {idea_id: v.to_dict() for idea_id, v in sorted(verdicts.items())},
        "rejected": [
            {"idea": idea.with_status("rejected").to_dict(), "verdict": verdict.to_dict()}
            for idea, verdict in rejected if idea.idea_id not in retained_ids
        ],
        "retained_ids": sorted(retained_ids),
    })
    rt.store.write("selecting_ideas_selected",
                   [idea.with_status("selected").to_dict() for idea in retained])
    rt.sink.emit("info", f"{len(retained)} ideas advance to panel review",
                 agent_tag="external_selection")


def phase_reviewing(rt: PhaseRuntime) -> None:
    config = rt.config
    ideas = [ResearchIdea.from_dict(item) for item in rt.store.read("selecting_ideas_selected")]
    papers = _load_papers(rt)
    digest = "\n".join(f"- {p.title}" for p in papers[:10])

    evaluations = []
    reviewed: list[ResearchIdea] = []
    with ThreadPoolExecutor(max_workers=2) as pool:
        for idea in ideas:
            review_future = pool.submit(review_idea, rt.gateway, idea, events=rt.sink)
            novelty_future = pool.submit(assess_novelty, rt.gateway, idea, digest,
                                         events=rt.sink)
            try:
                review = review_future.result()
                novelty = novelty_future.result()
            except Unparseable as exc:
                rt.sink.emit("warning",
                             f"{idea.idea_id} is unreviewable and was excluded: {exc}",
                             agent_tag="reviewer")
                continue
            evaluations.append(aggregate(review, novelty, idea.idea_id))
            reviewed.append(idea.with_status("reviewed"))

    if not evaluations:
        raise Unparseable("no idea survived panel review")

    portfolio = build_portfolio(
        evaluations, config.num_ideas,
        high_quality_threshold=config.high_quality_threshold,
        review_suggestion_count=config.review_suggestion_count,
        novelty_suggestion_count=config.novelty_suggestion_count,
    )
    rt.store.write("reviewing_portfolio", {
        "portfolio": portfolio.to_dict(),
        "ideas": [idea.to_dict() for idea in reviewed],
    })
    rt.sink.emit("info",
                 f"portfolio selected {len(portfolio.selected_ids)} of "
                 f"{len(evaluations)} reviewed ideas "
                 f"(mean unified {portfolio.statistics['mean_unified']:.2f})",
                 agent_tag="aggregator")


PHASE_FUNCTIONS = {
    "curating": phase_curating,
    "generating": phase_generating,
    "selecting": phase_selecting,
    "reviewing": phase_reviewing,
}
