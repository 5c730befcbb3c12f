"""Panel-review types: reviewer reports, novelty reports, fused evaluations,
and the final portfolio."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..scoring import mean, weighted_sum

REVIEW_WEIGHTS = {
    "novelty": 0.25,
    "feasibility": 0.20,
    "clarity": 0.20,
    "impact": 0.25,
    "methodology": 0.10,
}
REVIEW_DIMS = tuple(REVIEW_WEIGHTS)

NOVELTY_DIMS = ("technical", "problem", "application", "theoretical", "empirical")

ACCEPT_THRESHOLD = 4.0
MINOR_REVISION_THRESHOLD = 3.5

UNIFIED_WEIGHTS = (0.30, 0.30, 0.40)  # avg novelty, feasibility, mean of the rest
HIGH_QUALITY_THRESHOLD = 3.5

PORTFOLIO_BANDS = (
    ("excellent", 4.0),
    ("good", 3.5),
    ("mid", 3.0),
    ("weak", 2.0),
)


def review_overall(dims: dict[str, float]) -> float:
    return weighted_sum([(REVIEW_WEIGHTS[name], dims[name]) for name in REVIEW_DIMS])


def review_decision(overall: float) -> str:
    if overall >= ACCEPT_THRESHOLD:
        return "accept"
    if overall >= MINOR_REVISION_THRESHOLD:
        return "minor_revision"
    return "major_revision"


def novelty_band(overall: float) -> str:
    if overall >= 4.0:
        return "high"
    if overall >= 3.5:
        return "mid_high"
    return "low"


def portfolio_band(unified: float) -> str:
    for name, floor in PORTFOLIO_BANDS:
        if unified >= floor:
            return name
    return "poor"


def unified_score(avg_novelty: float, feasibility: float, rest_mean: float) -> float:
    w_novelty, w_feasibility, w_rest = UNIFIED_WEIGHTS
    return weighted_sum([
        (w_novelty, avg_novelty),
        (w_feasibility, feasibility),
        (w_rest, rest_mean),
    ])


@dataclass(frozen=True)
class ReviewReport:
    dims: dict[str, float]  # novelty, feasibility, clarity, impact, methodology
    strengths: tuple[str, ...]
    weaknesses: tuple[str, ...]
    suggestions: tuple[str, ...]
    overall: float
    decision: str

    @classmethod
    def build(cls, dims: dict[str, float], strengths=(), weaknesses=(),
              suggestions=()) -> "ReviewReport":
        overall = review_overall(dims)
        return cls(
            dims=dict(dims),
            strengths=tuple(strengths),
            weaknesses=tuple(weaknesses),
            suggestions=tuple(suggestions),
            overall=overall,
            decision=review_decision(overall),
        )

    def to_dict(self) -> dict:
        return {
            "dims": dict(self.dims),
            "strengths": list(self.strengths),
            "weaknesses": list(self.weaknesses),
            "suggestions": list(self.suggestions),
            "overall": self.overall,
            "decision": self.decision,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReviewReport":
        return cls(
            dims=dict(data["dims"]),
            strengths=tuple(data.get("strengths", ())),
            weaknesses=tuple(data.get("weaknesses", ())),
            suggestions=tuple(data.get("suggestions", ())),
            overall=data["overall"],
            decision=data["decision"],
        )


@dataclass(frozen=True)
class NoveltyReport:
    dims: dict[str, float]  # technical, problem, application, theoretical, empirical
    overall: float          # equal-weighted mean
    band: str
    highlights: tuple[str, ...] = ()
    suggestions: tuple[str, ...] = ()

    @classmethod
    def build(cls, dims: dict[str, float], highlights=(), suggestions=()) -> "NoveltyReport":
        overall = mean([dims[name] for name in NOVELTY_DIMS])
        return cls(
            dims=dict(dims),
            overall=overall,
            band=novelty_band(overall),
            highlights=tuple(highlights),
            suggestions=tuple(suggestions),
        )

    def to_dict(self) -> dict:
        return {
            "dims": dict(self.dims),
            "overall": self.overall,
            "band": self.band,
            "highlights": list(self.highlights),
            "suggestions": list(self.suggestions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NoveltyReport":
        return cls(
            dims=dict(data["dims"]),
            overall=data["overall"],
            band=data["band"],
            highlights=tuple(data.get("highlights", ())),
            suggestions=tuple(data.get("suggestions", ())),
        )


@dataclass(frozen=True)
class UnifiedEvaluation:
    idea_id: str
    avg_novelty: float
    unified: float
    meta_review: str
    review: ReviewReport
    novelty: NoveltyReport

    def to_dict(self) -> dict:
        return {
            "idea_id": self.idea_id,
            "avg_novelty": self.avg_novelty,
            "unified": self.unified,
            "meta_review": self.meta_review,
            "review": self.review.to_dict(),
            "novelty": self.novelty.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UnifiedEvaluation":
        return cls(
            idea_id=data["idea_id"],
            avg_novelty=data["avg_novelty"],
            unified=data["unified"],
            meta_review=data["meta_review"],
            review=ReviewReport.from_dict(data["review"]),
            novelty=NoveltyReport.from_dict(data["novelty"]),
        )


@dataclass
class PortfolioReport:
    ranked: list[UnifiedEvaluation]
    high_quality_ids: list[str]
    selected_ids: list[str]
    bands: dict[str, str]
    statistics: dict[str, float]
    review_suggestions: list[str] = field(default_factory=list)
    novelty_suggestions: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "ranked": [evaluation.to_dict() for evaluation in self.ranked],
            "high_quality_ids": list(self.high_quality_ids),
            "selected_ids": list(self.selected_ids),
            "bands": dict(self.bands),
            "statistics": dict(self.statistics),
            "review_suggestions": list(self.review_suggestions),
            "novelty_suggestions": list(self.novelty_suggestions),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PortfolioReport":
        return cls(
            ranked=[UnifiedEvaluation.from_dict(item) for item in data["ranked"]],
            high_quality_ids=list(data["high_quality_ids"]),
            selected_ids=list(data["selected_ids"]),
            bands=dict(data["bands"]),
            statistics=dict(data["statistics"]),
            review_suggestions=list(data.get("review_suggestions", [])),
            novelty_suggestions=list(data.get("novelty_suggestions", [])),
        )
