"""Merging, scoring, and ranking of the retrieved literature pool."""

from __future__ import annotations

import math
from dataclasses import replace

from ..events import NULL_SINK, EventSink
from ..gateway import Gateway, cosine
from .models import PaperRecord

AGENT = "knowledge_grounding"

RELEVANCE_WEIGHT = 0.7
CITATION_WEIGHT = 0.3


def combined_score(relevance: float, citation_norm: float) -> float:
    """0.7 relevance + 0.3 normalized citations, computed on an integer grid
    so decimal inputs hit threshold boundaries exactly."""
    return (7.0 * relevance + 3.0 * citation_norm) / 10.0


def dedupe_and_rank(
    gateway: Gateway,
    papers: list[PaperRecord],
    seed_topic: str,
    n: int = 50,
    *,
    near_duplicate_cosine: float = 0.95,
    min_relevance: float = 0.0,
    events: EventSink = NULL_SINK,
) -> list[PaperRecord]:
    """Merge duplicate hits across queries, score, and keep the top n.

    Relevance is the cosine between the seed topic and title+abstract,
    mapped from [-1, 1] onto [0, 1]. Citations are log-normalized within the
    merged pool. Ties break on ascending paper_id so ranking is a total
    order regardless of input order.
    """
    merged: dict[str, PaperRecord] = {}
    for paper in papers:
        if paper.paper_id not in merged:
            merged[paper.paper_id] = paper
    pool = sorted(merged.values(), key=lambda p: p.paper_id)

    if not pool:
        events.emit("warning", "retrieval produced an empty literature pool", agent_tag=AGENT)
        return []

    # Near-duplicate titles (preprint/published pairs): keep the first-merged record.
    title_vectors = gateway.embed([p.title if p.title.strip() else p.paper_id for p in pool])
    survivors: list[PaperRecord] = []
    survivor_vectors = []
    for paper, vector in zip(pool, title_vectors):
        duplicate_of = None
        for kept, kept_vector in zip(survivors, survivor_vectors):
            if cosine(vector, kept_vector) > near_duplicate_cosine:
                duplicate_of = kept
                break
        if duplicate_of is None:
            survivors.append(paper)
            survivor_vectors.append(vector)
        else:
            events.emit("info",
                        f"dropped near-duplicate {paper.paper_id} of {duplicate_of.paper_id}",
                        agent_tag=AGENT)

    seed_vector = gateway.embed([seed_topic])[0]
    body_vectors = gateway.embed([p.combined_text() or p.paper_id for p in survivors])
    c_max = max(p.citation_count for p in survivors)
    log_cmax = math.log1p(c_max) if c_max > 0 else 0.0

    scored: list[PaperRecord] = []
    for paper, vector in zip(survivors, body_vectors):
        relevance = (cosine(seed_vector, vector) + 1.0) / 2.0
        citation_norm = math.log1p(paper.citation_count) / log_cmax if log_cmax else 0.0
        scored.append(replace(
            paper,
            relevance=relevance,
            citation_norm=citation_norm,
            combined_score=combined_score(relevance, citation_norm),
        ))

    if min_relevance > 0.0:
        scored = [p for p in scored if p.relevance >= min_relevance]

    scored.sort(key=lambda p: (-p.combined_score, p.paper_id))
    return scored[:n]
