from .external import external_filter, external_similarity, idea_text
from .internal import (
    attach_scores,
    jaccard,
    merge_similar,
    reduce_pool,
    score_internal,
)
from .models import (
    CriteriaScores,
    SimilarityVerdict,
    internal_weighted_total,
    similarity_band,
)

__all__ = [
    "CriteriaScores",
    "SimilarityVerdict",
    "attach_scores",
    "external_filter",
    "external_similarity",
    "idea_text",
    "internal_weighted_total",
    "jaccard",
    "merge_similar",
    "reduce_pool",
    "score_internal",
    "similarity_band",
]
