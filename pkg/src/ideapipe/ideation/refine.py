"""Self-critique and the two-pass refinement loop."""

from __future__ import annotations

import re
from dataclasses import replace

from ..errors import RoundBudgetExhausted
from ..events import NULL_SINK, EventSink
from ..gateway import Gateway
from ..scoring import clamp
from .models import Critique, IdeaFacets, ResearchIdea, Revision
from .parsing import parse_facets

AGENT = "idea_exploration"

_SCORE_LINE = re.compile(
    r"^\s*[-*]?\s*(novelty|feasibility|clarity|impact)\s*:\s*([0-9]+(?:\.[0-9]+)?)\s*(?:/\s*5)?\s*$",
    re.IGNORECASE,
)
_SUGGESTION = re.compile(r"^\s*[-*]\s+(.*\S)\s*$")

CRITERIA = ("novelty", "feasibility", "clarity", "impact")
SATISFACTORY = 4.0
MAX_ROUNDS = 2


def critique(gateway: Gateway, idea: ResearchIdea, *,
             events: EventSink = NULL_SINK) -> Critique:
    """Per-criterion self-critique; out-of-range scores clamp with a warning,
    and a below-4 criterion is guaranteed at least one suggestion."""
    response = gateway.chat("idea_critique", {"idea": idea.rendered()}, agent_tag=AGENT)

    scores: dict[str, float] = {}
    suggestions: list[str] = []
    in_suggestions = False
    for line in response.text.splitlines():
        match = _SCORE_LINE.match(line)
        if match:
            scores[match.group(1).lower()] = float(match.group(2))
            in_suggestions = False
            continue
        if re.match(r"^\s*suggestions\s*:?\s*$", line, re.IGNORECASE):
            in_suggestions = True
            continue
        if in_suggestions:
            bullet = _SUGGESTION.match(line)
            if bullet:
                suggestions.append(bullet.group(1))

    for name in CRITERIA:
        raw = scores.get(name, 1.0)
        clamped = clamp(raw, 1.0, 5.0)
        if clamped != raw:
            events.emit("warning",
                        f"critique {name} score {raw} out of range for {idea.idea_id}; clamped",
                        agent_tag=AGENT)
        scores[name] = clamped

    if any(score < SATISFACTORY for score in scores.values()) and not suggestions:
        weakest = min(CRITERIA, key=lambda name: scores[name])
        suggestions.append(f"strengthen the {weakest} of the proposal")
        events.emit("warning",
                    f"critique for {idea.idea_id} lacked suggestions; synthesized one",
                    agent_tag=AGENT)

    return Critique(scores=scores, suggestions=tuple(suggestions))


def refine(gateway: Gateway, idea: ResearchIdea, review: Critique, round: int, *,
           validation_components: int = 5,
           events: EventSink = NULL_SINK) -> ResearchIdea:
    """Round 1 rewrites all facets (skipped when every score is already >= 4);
    round 2 regenerates only the experimental validation."""
    if round > MAX_ROUNDS:
        raise RoundBudgetExhausted(f"refinement round {round} exceeds the budget of {MAX_ROUNDS}")

    if round == 1:
        if review.all_satisfactory(SATISFACTORY):
            return idea
        response = gateway.chat(
            "refine_first_pass",
            {
                "idea": idea.rendered(),
                "suggestions": "\n".join(f"- {s}" for s in review.suggestions),
                "novelty_score": f"{review.scores['novelty']:.1f}",
                "feasibility_score": f"{review.scores['feasibility']:.1f}",
                "clarity_score": f"{review.scores['clarity']:.1f}",
                "impact_score": f"{review.scores['impact']:.1f}",
            },
            agent_tag=AGENT,
        )
        facets = parse_facets(response.text)
        if facets is None:
            events.emit("warning",
                        f"first-pass refinement of {idea.idea_id} had unusable sections; kept original",
                        agent_tag=AGENT)
            return idea
        return replace(
            idea,
            facets=facets,
            revisions=idea.revisions + (Revision(1, review.summary(), idea.facets),),
        )

    # round 2: validation elaboration only, other facets byte-identical
    response = gateway.chat(
        "refine_second_pass",
        {
            "topic": idea.title,
            "problem": idea.facets.problem_statement,
            "methodology": idea.facets.proposed_methodology,
            "validation": idea.facets.experimental_validation,
            "critique_suggestions": "\n".join(f"- {s}" for s in review.suggestions) or "none",
            "validation_components": str(validation_components),
        },
        agent_tag=AGENT,
    )
    payload = gateway.parse_structured(response, "json_object", agent_tag=AGENT)
    new_validation = str(payload.get("Experimental Validation", "")).strip()
    if not new_validation:
        events.emit("warning",
                    f"second-pass refinement of {idea.idea_id} returned no validation; kept original",
                    agent_tag=AGENT)
        return idea
    return replace(
        idea,
        facets=IdeaFacets(
            idea.facets.problem_statement,
            idea.facets.proposed_methodology,
            new_validation,
        ),
        revisions=idea.revisions + (Revision(2, review.summary(), idea.facets),),
    )
