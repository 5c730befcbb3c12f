"""Reviewer and novelty agents plus the score aggregator."""

from __future__ import annotations

from ..errors import Unparseable
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from ..ideation.models import ResearchIdea
from ..scoring import clamp, mean
from .models import (
    NOVELTY_DIMS,
    REVIEW_DIMS,
    NoveltyReport,
    ReviewReport,
    UnifiedEvaluation,
    unified_score,
)

REVIEWER = "reviewer"
NOVELTY = "novelty"
AGGREGATOR = "aggregator"

REVIEW_CRITERIA_DESCRIPTIONS = (
    "- Novelty: originality of the direction relative to the field\n"
    "- Feasibility: technical and practical viability\n"
    "- Clarity: precision of the problem, method, and validation\n"
    "- Impact: expected significance if successful\n"
    "- Methodology: soundness and rigor of the proposed approach"
)


def _clamped_dims(raw: dict, names: tuple[str, ...], idea_id: str, agent: str,
                  events: EventSink) -> dict[str, float]:
    dims: dict[str, float] = {}
    for name in names:
        if name not in raw:
            raise Unparseable(f"{agent} output for {idea_id} lacks dimension {name!r}")
        value = float(raw[name])
        clamped = clamp(value, 1.0, 5.0)
        if clamped != value:
            events.emit("warning", f"{agent} score {name}={value} clamped for {idea_id}",
                        agent_tag=agent)
        dims[name] = clamped
    return dims


def _string_list(value) -> tuple[str, ...]:
    if not isinstance(value, list):
        return ()
    return tuple(str(item) for item in value if str(item).strip())


def review_idea(gateway: Gateway, idea: ResearchIdea, *,
                events: EventSink = NULL_SINK) -> ReviewReport:
    """Structured peer review. The overall score and decision are recomputed
    from the dimensions; any model-reported aggregate is ignored."""
    response = gateway.chat(
        "detailed_review",
        {"criteria_descriptions": REVIEW_CRITERIA_DESCRIPTIONS, "idea": idea.rendered()},
        agent_tag=REVIEWER,
    )
    payload = gateway.parse_structured(response, "json_object", agent_tag=REVIEWER)
    raw_scores = payload.get("scores")
    if not isinstance(raw_scores, dict):
        raise Unparseable(f"review for {idea.idea_id} lacks a scores object")
    dims = _clamped_dims(raw_scores, REVIEW_DIMS, idea.idea_id, REVIEWER, events)
    return ReviewReport.build(
        dims,
        strengths=_string_list(payload.get("strengths")),
        weaknesses=_string_list(payload.get("weaknesses")),
        suggestions=_string_list(payload.get("suggestions")),
    )


def assess_novelty(gateway: Gateway, idea: ResearchIdea, literature_digest: str, *,
                   events: EventSink = NULL_SINK) -> NoveltyReport:
    """Five-dimension originality audit; overall is the equal-weighted mean."""
    response = gateway.chat(
        "novelty_assessment",
        {"idea": idea.rendered(), "existing_work_context": literature_digest or "none provided"},
        agent_tag=NOVELTY,
    )
    payload = gateway.parse_structured(response, "json_object", agent_tag=NOVELTY)
    raw_dims = payload.get("dimensions")
    if not isinstance(raw_dims, dict):
        raise Unparseable(f"novelty assessment for {idea.idea_id} lacks dimensions")
    dims = _clamped_dims(raw_dims, NOVELTY_DIMS, idea.idea_id, NOVELTY, events)
    return NoveltyReport.build(
        dims,
        highlights=_string_list(payload.get("highlights")),
        suggestions=_string_list(payload.get("suggestions")),
    )


def _attributed(source: str, items: tuple[str, ...]) -> list[str]:
    seen: set[str] = set()
    lines = []
    for item in items:
        key = item.strip().casefold()
        if key and key not in seen:
            seen.add(key)
            lines.append(f"[{source}] {item.strip()}")
    return lines


def aggregate(review: ReviewReport, novelty: NoveltyReport, idea_id: str) -> UnifiedEvaluation:
    """Fuse both perspectives: the shared novelty dimension is averaged
    across agents, the unified score emphasizes originality and feasibility,
    and both component reports ride along verbatim for traceability."""
    avg_novelty = (review.dims["novelty"] + novelty.overall) / 2.0
    rest_mean = mean([review.dims["clarity"], review.dims["impact"], review.dims["methodology"]])
    unified = unified_score(avg_novelty, review.dims["feasibility"], rest_mean)

    meta_lines = (
        _attributed("reviewer strengths", review.strengths)
        + _attributed("reviewer weaknesses", review.weaknesses)
        + _attributed("novelty highlights", novelty.highlights)
    )
    return UnifiedEvaluation(
        idea_id=idea_id,
        avg_novelty=avg_novelty,
        unified=unified,
        meta_review="\n".join(meta_lines) if meta_lines else "no qualitative feedback",
        review=review,
        novelty=novelty,
    )
