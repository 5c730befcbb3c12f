"""Pipeline configuration: every tunable the stages consume, with validated defaults."""

from __future__ import annotations

import copy
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import InvalidConfig

_WEIGHT_TOL = 1e-9


@dataclass
class PipelineConfig:
    topic: str = ""
    num_ideas: int = 3
    backend: str = "scripted"            # scripted | live
    rng_seed: int = 0
    hitl: str = "off"                    # off | gate_each_phase

    # stage A: literature grounding
    papers_per_run: int = 50
    relevance_weight: float = 0.7
    citation_weight: float = 0.3
    query_cap: int = 40
    search_limit_per_query: int = 20
    min_relevance: float = 0.0           # 0 disables the relevance floor
    near_duplicate_title_cosine: float = 0.95

    # stage A: knowledge graph construction
    kg_batch_size: int = 3
    kg_expand_k: int = 10
    kg_enhance_sample: int = 20
    kg_enhance_top_fraction: float = 0.6
    kg_enhance_iterations: int = 2

    # stage B: planning and generation
    planner_top_entities: int = 20
    planner_top_papers: int = 5
    facet_word_floors: tuple[int, int, int] = (400, 500, 400)
    overgeneration_factor: int = 10
    refinement_rounds: int = 2
    validation_components: int = 5
    semantic_duplicate_cosine: float = 0.92

    # stage B: graph-of-thought sampling
    got_max_paths: int = 100
    got_max_anchor_entities: int = 20
    got_depth: int = 5
    got_branching: int = 3
    got_start_nodes: int = 10
    got_min_path_score: float = 0.5
    got_bridges_per_facet: int = 3
    path_weight_node_quality: float = 0.6
    path_weight_edge_diversity: float = 0.2
    path_weight_length: float = 0.2

    # stage C: internal + external selection
    internal_weight_novelty: float = 0.30
    internal_weight_feasibility: float = 0.25
    internal_weight_clarity: float = 0.20
    internal_weight_impact: float = 0.25
    internal_batch_size: int = 50
    merge_jaccard_threshold: float = 0.85
    merge_max_iterations: int = 20
    selection_multiplier: int = 5        # pool shrinks from 10x to 5x the target
    external_similarity_cutoff: float = 0.7

    # stage D: panel review and portfolio
    review_weight_novelty: float = 0.25
    review_weight_feasibility: float = 0.20
    review_weight_clarity: float = 0.20
    review_weight_impact: float = 0.25
    review_weight_methodology: float = 0.10
    accept_threshold: float = 4.0
    minor_revision_threshold: float = 3.5
    unified_weight_novelty: float = 0.30
    unified_weight_feasibility: float = 0.30
    unified_weight_rest: float = 0.40
    high_quality_threshold: float = 3.5
    review_suggestion_count: int = 3
    novelty_suggestion_count: int = 2

    # gateway
    temperature: float = 0.8
    max_tokens: int = 32768
    max_retries: int = 3
    retry_base_delay: float = 0.5
    concurrency_budget: int = 4
    embedding_seed: int = 7
    embedding_dim: int = 64

    def validate(self) -> None:
        problems: dict[str, str] = {}
        weight_groups = {
            "retrieval weights": self.relevance_weight + self.citation_weight,
            "path score weights": self.path_weight_node_quality
            + self.path_weight_edge_diversity
            + self.path_weight_length,
            "internal criteria weights": self.internal_weight_novelty
            + self.internal_weight_feasibility
            + self.internal_weight_clarity
            + self.internal_weight_impact,
            "review criteria weights": self.review_weight_novelty
            + self.review_weight_feasibility
            + self.review_weight_clarity
            + self.review_weight_impact
            + self.review_weight_methodology,
            "unified weights": self.unified_weight_novelty
            + self.unified_weight_feasibility
            + self.unified_weight_rest,
        }
        for name, total in weight_groups.items():
            if abs(total - 1.0) > _WEIGHT_TOL:
                problems[name] = f"must sum to 1.0, got {total!r}"

        for name, value in [
            ("got_min_path_score", self.got_min_path_score),
            ("merge_jaccard_threshold", self.merge_jaccard_threshold),
            ("external_similarity_cutoff", self.external_similarity_cutoff),
            ("semantic_duplicate_cosine", self.semantic_duplicate_cosine),
            ("near_duplicate_title_cosine", self.near_duplicate_title_cosine),
            ("min_relevance", self.min_relevance),
        ]:
            if not 0.0 <= value <= 1.0:
                problems[name] = f"must lie in [0, 1], got {value!r}"
        for name, value in [
            ("accept_threshold", self.accept_threshold),
            ("minor_revision_threshold", self.minor_revision_threshold),
            ("high_quality_threshold", self.high_quality_threshold),
        ]:
            if not 1.0 <= value <= 5.0:
                problems[name] = f"must lie in [1, 5], got {value!r}"
        if not 0.0 <= self.temperature <= 2.0:
            problems["temperature"] = f"must lie in [0, 2], got {self.temperature!r}"

        for name in (
            "num_ideas", "papers_per_run", "query_cap", "search_limit_per_query",
            "kg_batch_size", "kg_expand_k", "kg_enhance_sample", "kg_enhance_iterations",
            "planner_top_entities", "planner_top_papers", "overgeneration_factor",
            "got_max_paths", "got_max_anchor_entities", "got_depth", "got_branching",
            "got_start_nodes", "got_bridges_per_facet", "internal_batch_size",
            "merge_max_iterations", "selection_multiplier", "max_tokens",
            "concurrency_budget", "embedding_dim",
        ):
            if getattr(self, name) < 1:
                problems[name] = "must be a positive integer"
        if self.backend not in ("scripted", "live"):
            problems["backend"] = f"must be 'scripted' or 'live', got {self.backend!r}"
        if self.hitl not in ("off", "gate_each_phase"):
            problems["hitl"] = f"must be 'off' or 'gate_each_phase', got {self.hitl!r}"
        if not self.topic or not self.topic.strip():
            problems["topic"] = "must be non-blank"

        if problems:
            raise InvalidConfig(problems)

    def snapshot(self) -> "PipelineConfig":
        """Deep copy so later caller mutations never reach a running session."""
        return copy.deepcopy(self)

    def to_dict(self) -> dict:
        data = asdict(self)
        data["facet_word_floors"] = list(self.facet_word_floors)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise InvalidConfig({name: "unknown config field" for name in unknown})
        kwargs = dict(data)
        if "facet_word_floors" in kwargs:
            kwargs["facet_word_floors"] = tuple(kwargs["facet_word_floors"])
        return cls(**kwargs)

    @classmethod
    def load(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def with_overrides(self, overrides: dict) -> "PipelineConfig":
        merged = self.to_dict()
        unknown = sorted(set(overrides) - set(merged))
        if unknown:
            raise InvalidConfig({name: "unknown config field" for name in unknown})
        merged.update(overrides)
        return PipelineConfig.from_dict(merged)
