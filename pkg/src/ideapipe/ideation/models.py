"""Idea-generation types: plans, reasoning paths, ideas, critiques."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, replace

STRATEGIES = ("base", "got", "cross", "merged")
STATUSES = ("draft", "refined", "selected", "rejected", "reviewed")


@dataclass(frozen=True)
class IdeaFacets:
    problem_statement: str
    proposed_methodology: str
    experimental_validation: str

    def combined(self) -> str:
        return " ".join([
            self.problem_statement,
            self.proposed_methodology,
            self.experimental_validation,
        ])

    def non_blank(self) -> bool:
        return all(text.strip() for text in (
            self.problem_statement, self.proposed_methodology, self.experimental_validation,
        ))


@dataclass(frozen=True)
class ResearchPlan:
    gaps: tuple[str, ...]
    facets: IdeaFacets
    context_digest: dict

    def to_dict(self) -> dict:
        return {
            "gaps": list(self.gaps),
            "facets": asdict(self.facets),
            "context_digest": self.context_digest,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ResearchPlan":
        return cls(
            gaps=tuple(data["gaps"]),
            facets=IdeaFacets(**data["facets"]),
            context_digest=data.get("context_digest", {}),
        )


@dataclass(frozen=True)
class ReasoningPath:
    path_id: str
    nodes: tuple[str, ...]
    edge_types: tuple[str, ...]
    node_quality: float
    edge_diversity: float
    length_pref: float
    total: float

    def to_dict(self) -> dict:
        return {
            "path_id": self.path_id,
            "nodes": list(self.nodes),
            "edge_types": list(self.edge_types),
            "node_quality": self.node_quality,
            "edge_diversity": self.edge_diversity,
            "length_pref": self.length_pref,
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReasoningPath":
        return cls(
            path_id=data["path_id"],
            nodes=tuple(data["nodes"]),
            edge_types=tuple(data["edge_types"]),
            node_quality=data["node_quality"],
            edge_diversity=data["edge_diversity"],
            length_pref=data["length_pref"],
            total=data["total"],
        )


@dataclass(frozen=True)
class Revision:
    round: int
    critique_summary: str
    prior_facets: IdeaFacets


@dataclass(frozen=True)
class Critique:
    scores: dict[str, float]  # novelty, feasibility, clarity, impact in [1, 5]
    suggestions: tuple[str, ...]

    def all_satisfactory(self, floor: float = 4.0) -> bool:
        return all(score >= floor for score in self.scores.values())

    def summary(self) -> str:
        parts = ", ".join(f"{name} {score:.1f}" for name, score in sorted(self.scores.items()))
        if self.suggestions:
            return f"{parts}; {self.suggestions[0]}"
        return parts


@dataclass(frozen=True)
class ResearchIdea:
    idea_id: str
    title: str
    facets: IdeaFacets
    strategy: str = "base"
    lineage: tuple[str, ...] = ()
    supporting_papers: tuple[str, ...] = ()
    revisions: tuple[Revision, ...] = ()
    internal_scores: object | None = None  # selection.CriteriaScores once scored
    status: str = "draft"

    def with_status(self, status: str) -> "ResearchIdea":
        return replace(self, status=status)

    def to_dict(self) -> dict:
        data = {
            "idea_id": self.idea_id,
            "title": self.title,
            "facets": asdict(self.facets),
            "strategy": self.strategy,
            "lineage": list(self.lineage),
            "supporting_papers": list(self.supporting_papers),
            "revisions": [
                {
                    "round": rev.round,
                    "critique_summary": rev.critique_summary,
                    "prior_facets": asdict(rev.prior_facets),
                }
                for rev in self.revisions
            ],
            "status": self.status,
        }
        if self.internal_scores is not None:
            data["internal_scores"] = self.internal_scores.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "ResearchIdea":
        from ..selection.models import CriteriaScores

        scores = data.get("internal_scores")
        return cls(
            idea_id=data["idea_id"],
            title=data["title"],
            facets=IdeaFacets(**data["facets"]),
            strategy=data.get("strategy", "base"),
            lineage=tuple(data.get("lineage", ())),
            supporting_papers=tuple(data.get("supporting_papers", ())),
            revisions=tuple(
                Revision(
                    round=rev["round"],
                    critique_summary=rev["critique_summary"],
                    prior_facets=IdeaFacets(**rev["prior_facets"]),
                )
                for rev in data.get("revisions", ())
            ),
            internal_scores=CriteriaScores.from_dict(scores) if scores else None,
            status=data.get("status", "draft"),
        )

    def rendered(self) -> str:
        """Plain-text rendering used when an idea is bound into a prompt."""
        return (
            f"Title: {self.title}\n\n"
            f"Problem Statement:\n{self.facets.problem_statement}\n\n"
            f"Proposed Methodology:\n{self.facets.proposed_methodology}\n\n"
            f"Experimental Validation:\n{self.facets.experimental_validation}"
        )


class IdeaIdAllocator:
    """Sequential, deterministic idea ids for one session."""

    def __init__(self, start: int = 0):
        self._counter = start

    def next(self) -> str:
        self._counter += 1
        return f"idea-{self._counter:04d}"
