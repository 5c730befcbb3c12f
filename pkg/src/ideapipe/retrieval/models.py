"""Literature retrieval types."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field


@dataclass(frozen=True)
class Concept:
    text: str
    rank: int  # 1 = most fundamental


@dataclass(frozen=True)
class QueryPlan:
    queries: tuple[str, ...]
    granularities: tuple[str, ...]  # single | pair | tuple, aligned with queries

    def __post_init__(self):
        assert len(self.queries) == len(self.granularities)


@dataclass
class PaperRecord:
    paper_id: str
    title: str
    abstract: str = ""
    authors: list[str] = field(default_factory=list)
    year: int = 0
    venue: str = ""
    citation_count: int = 0
    keywords: list[str] = field(default_factory=list)
    relevance: float = 0.0
    citation_norm: float = 0.0
    combined_score: float = 0.0

    def combined_text(self) -> str:
        """Text used for semantic comparisons: title and abstract, space-joined."""
        return f"{self.title} {self.abstract}".strip()

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PaperRecord":
        return cls(**data)
