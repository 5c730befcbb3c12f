"""External selection: novelty filtering against the retrieved literature."""

from __future__ import annotations

from ..events import NULL_SINK, EventSink
from ..gateway import Gateway, cosine
from ..ideation.models import ResearchIdea
from ..retrieval.models import PaperRecord
from .models import SimilarityVerdict, similarity_band

AGENT = "external_selection"

TOP_OVERLAPS = 5


def idea_text(idea: ResearchIdea) -> str:
    """Combined text fields compared against the literature."""
    return f"{idea.title} {idea.facets.combined()}".strip()


def external_similarity(gateway: Gateway, idea: ResearchIdea,
                        papers: list[PaperRecord]) -> SimilarityVerdict:
    """Max cosine between the idea and every paper, with the top overlaps
    recorded for transparency. Empty literature degrades to band low."""
    if not papers:
        return SimilarityVerdict(idea_id=idea.idea_id, max_similarity=-1.0,
                                 band="low", top_overlaps=())
    idea_vector = gateway.embed([idea_text(idea)])[0]
    paper_vectors = gateway.embed([p.combined_text() or p.paper_id for p in papers])
    similarities = sorted(
        ((cosine(idea_vector, vector), paper.paper_id)
         for paper, vector in zip(papers, paper_vectors)),
        key=lambda pair: (-pair[0], pair[1]),
    )
    max_similarity = similarities[0][0]
    return SimilarityVerdict(
        idea_id=idea.idea_id,
        max_similarity=max_similarity,
        band=similarity_band(max_similarity),
        top_overlaps=tuple((pid, sim) for sim, pid in similarities[:TOP_OVERLAPS]),
    )


def external_filter(
    gateway: Gateway,
    ideas: list[ResearchIdea],
    papers: list[PaperRecord],
    *,
    cutoff: float = 0.7,
    events: EventSink = NULL_SINK,
) -> tuple[list[ResearchIdea], list[tuple[ResearchIdea, SimilarityVerdict]],
           dict[str, SimilarityVerdict]]:
    """Partition ideas into retained (max similarity strictly below the
    cutoff) and rejected-with-verdict. Every idea gets a verdict either way."""
    retained: list[ResearchIdea] = []
    rejected: list[tuple[ResearchIdea, SimilarityVerdict]] = []
    verdicts: dict[str, SimilarityVerdict] = {}
    for idea in ideas:
        verdict = external_similarity(gateway, idea, papers)
        verdicts[idea.idea_id] = verdict
        if verdict.max_similarity < cutoff:
            retained.append(idea)
        else:
            rejected.append((idea, verdict))
            events.emit(
                "info",
                f"rejected {idea.idea_id}: max literature similarity "
                f"{verdict.max_similarity:.3f} (band {verdict.band})",
                agent_tag=AGENT,
                payload={"verdict": verdict.to_dict()},
            )
    return retained, rejected, verdicts
