from .builder import (
    enhance_relations,
    enrich_batch,
    expand_degree,
    merge_extraction,
    sample_top_degree,
    seed_core,
)
from .extraction import parse_extraction
from .model import (
    Entity,
    KnowledgeGraph,
    ParsedEntity,
    ParsedRelation,
    Relation,
    canonical_name,
    normalize_entity_type,
)

__all__ = [
    "Entity",
    "KnowledgeGraph",
    "ParsedEntity",
    "ParsedRelation",
    "Relation",
    "canonical_name",
    "enhance_relations",
    "enrich_batch",
    "expand_degree",
    "merge_extraction",
    "normalize_entity_type",
    "parse_extraction",
    "sample_top_degree",
    "seed_core",
]
