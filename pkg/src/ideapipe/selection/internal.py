"""Internal selection: batch rubric scoring, Jaccard merging, pool reduction."""

from __future__ import annotations

import re
from dataclasses import replace

from ..errors import IdeaPipeError
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from ..ideation.models import IdeaFacets, IdeaIdAllocator, ResearchIdea
from ..ideation.parsing import parse_idea_sections
from .models import CriteriaScores

AGENT = "internal_selection"

_TOKEN = re.compile(r"[a-z0-9]+")

CRITERIA_DESCRIPTIONS = (
    "- Novelty: how original and unprecedented the direction is\n"
    "- Feasibility: how realistic the implementation is with current resources\n"
    "- Clarity: how well-defined and understandable the approach is\n"
    "- Impact: the potential significance and breadth of the results"
)


def _ideas_batch_text(ideas: list[ResearchIdea]) -> str:
    blocks = []
    for i, idea in enumerate(ideas, start=1):
        blocks.append(
            f"IDEA {i}: {idea.title}\n"
            f"Problem: {idea.facets.problem_statement[:600]}\n"
            f"Method: {idea.facets.proposed_methodology[:600]}\n"
            f"Validation: {idea.facets.experimental_validation[:600]}"
        )
    return "\n\n".join(blocks)


def _scores_from_entry(entry: dict) -> CriteriaScores | None:
    criteria = entry.get("criteria", {})
    values = []
    for name in ("novelty", "feasibility", "clarity", "impact"):
        if name not in criteria:
            return None
        values.append(max(1.0, min(5.0, criteria[name])))
    return CriteriaScores.build(*values)


def score_internal(gateway: Gateway, ideas: list[ResearchIdea], *, batch_size: int = 50,
                   events: EventSink = NULL_SINK) -> dict[str, CriteriaScores]:
    """Prompt the rapid evaluator in batches; the weighted total is always
    computed engine-side from the per-criterion scores, never trusted from
    the model. Ideas left unscored get one retry batch, then default to 1.0."""
    assert ideas, "score_internal requires a non-empty pool"
    results: dict[str, CriteriaScores] = {}

    def run_batch(batch: list[ResearchIdea]) -> list[ResearchIdea]:
        try:
            response = gateway.chat(
                "internal_evaluation",
                {
                    "ideas_batch": _ideas_batch_text(batch),
                    "criteria_descriptions": CRITERIA_DESCRIPTIONS,
                },
                agent_tag=AGENT,
            )
            entries = gateway.parse_structured(response, "scored_lines", agent_tag=AGENT)
        except IdeaPipeError as exc:
            events.emit("warning", f"scoring batch failed: {exc}", agent_tag=AGENT)
            return batch
        unscored = []
        by_index = {entry["index"]: entry for entry in entries}
        for i, idea in enumerate(batch, start=1):
            scores = _scores_from_entry(by_index.get(i, {}))
            if scores is None:
                unscored.append(idea)
            else:
                results[idea.idea_id] = scores
        return unscored

    pending: list[ResearchIdea] = []
    for start in range(0, len(ideas), batch_size):
        pending.extend(run_batch(ideas[start:start + batch_size]))

    if pending:
        events.emit("warning", f"retrying {len(pending)} unscored ideas", agent_tag=AGENT)
        still_unscored: list[ResearchIdea] = []
        for start in range(0, len(pending), batch_size):
            still_unscored.extend(run_batch(pending[start:start + batch_size]))
        for idea in still_unscored:
            events.emit("warning",
                        f"{idea.idea_id} never scored; defaulting all criteria to 1.0",
                        agent_tag=AGENT)
            results[idea.idea_id] = CriteriaScores.build(1.0, 1.0, 1.0, 1.0)
    return results


def jaccard(text_a: str, text_b: str) -> float:
    """Intersection-over-union of case-folded word-token sets; 1.0 when both empty."""
    tokens_a = set(_TOKEN.findall(text_a.casefold()))
    tokens_b = set(_TOKEN.findall(text_b.casefold()))
    if not tokens_a and not tokens_b:
        return 1.0
    union = tokens_a | tokens_b
    if not union:
        return 1.0
    return len(tokens_a & tokens_b) / len(union)


def _merge_pair(gateway: Gateway, first: ResearchIdea, second: ResearchIdea,
                allocator: IdeaIdAllocator) -> ResearchIdea | None:
    response = gateway.chat(
        "idea_merging",
        {"ideas_to_merge": f"{first.rendered()}\n\n---\n\n{second.rendered()}"},
        agent_tag=AGENT,
    )
    sections = parse_idea_sections(response.text)
    facets = IdeaFacets(
        sections.get("problem_statement", ""),
        sections.get("proposed_methodology", ""),
        sections.get("experimental_validation", ""),
    )
    if not facets.non_blank():
        return None
    parent_totals = [
        s.weighted_total for s in (first.internal_scores, second.internal_scores) if s
    ]
    inherited = None
    if parent_totals:
        best_parent = max(
            (idea for idea in (first, second) if idea.internal_scores),
            key=lambda idea: idea.internal_scores.weighted_total,
        )
        inherited = best_parent.internal_scores
    return ResearchIdea(
        idea_id=allocator.next(),
        title=sections.get("title", "").strip() or f"Merged: {first.title}",
        facets=facets,
        strategy="merged",
        lineage=(first.idea_id, second.idea_id),
        supporting_papers=tuple(dict.fromkeys(first.supporting_papers + second.supporting_papers))[:3],
        internal_scores=inherited,
        status=first.status,
    )


def merge_similar(gateway: Gateway, ideas: list[ResearchIdea], *,
                  threshold: float = 0.85, max_iters: int = 20,
                  allocator: IdeaIdAllocator | None = None,
                  events: EventSink = NULL_SINK) -> tuple[list[ResearchIdea], list[dict]]:
    """Iteratively merge the most similar pair above the Jaccard threshold.

    Deterministic pair choice: highest similarity first, then ascending
    idea-id pair. Stops at the fixed point or after max_iters. Returns the
    pool plus a genealogy log of performed merges.
    """
    allocator = allocator or IdeaIdAllocator(start=10000)
    pool = list(ideas)
    genealogy: list[dict] = []
    ineligible: set[tuple[str, str]] = set()

    for iteration in range(1, max_iters + 1):
        best = None
        for i in range(len(pool)):
            for j in range(i + 1, len(pool)):
                a, b = pool[i], pool[j]
                pair_key = tuple(sorted((a.idea_id, b.idea_id)))
                if pair_key in ineligible:
                    continue
                similarity = jaccard(a.facets.combined(), b.facets.combined())
                if similarity > threshold:
                    candidate = (-similarity, pair_key, a, b)
                    if best is None or candidate < best:
                        best = candidate
        if best is None:
            return pool, genealogy

        _, pair_key, first, second = best
        try:
            merged = _merge_pair(gateway, first, second, allocator)
        except IdeaPipeError as exc:
            merged = None
            events.emit("warning", f"merge of {pair_key} failed: {exc}", agent_tag=AGENT)
        if merged is None:
            ineligible.add(pair_key)
            continue
        pool = [idea for idea in pool if idea.idea_id not in pair_key] + [merged]
        genealogy.append({
            "iteration": iteration,
            "parents": list(pair_key),
            "merged_id": merged.idea_id,
            "jaccard": -best[0],
        })

    events.emit("warning",
                f"merge loop stopped at the {max_iters}-iteration cap", agent_tag=AGENT)
    return pool, genealogy


def reduce_pool(ideas: list[ResearchIdea], target: int, *,
                multiplier: int = 5) -> list[ResearchIdea]:
    """Keep the top multiplier*target ideas by weighted total (ties: id asc)."""
    limit = multiplier * target
    if len(ideas) <= limit:
        return list(ideas)
    ranked = sorted(
        ideas,
        key=lambda idea: (
            -(idea.internal_scores.weighted_total if idea.internal_scores else 0.0),
            idea.idea_id,
        ),
    )
    return ranked[:limit]


def attach_scores(ideas: list[ResearchIdea],
                  scores: dict[str, CriteriaScores]) -> list[ResearchIdea]:
    return [
        replace(idea, internal_scores=scores.get(idea.idea_id, idea.internal_scores))
        for idea in ideas
    ]
