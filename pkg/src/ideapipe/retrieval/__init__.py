from .concepts import build_query_plan, decompose_topic
from .models import Concept, PaperRecord, QueryPlan
from .ranking import combined_score, dedupe_and_rank
from .scholar import FixtureSearchClient, HttpSearchClient, SearchClient

__all__ = [
    "Concept",
    "FixtureSearchClient",
    "HttpSearchClient",
    "PaperRecord",
    "QueryPlan",
    "SearchClient",
    "build_query_plan",
    "combined_score",
    "decompose_topic",
    "dedupe_and_rank",
]
