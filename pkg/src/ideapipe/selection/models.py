"""Selection-stage types: weighted criteria scores and similarity verdicts."""

from __future__ import annotations

from dataclasses import dataclass

from ..scoring import weighted_sum

INTERNAL_WEIGHTS = {
    "novelty": 0.30,
    "feasibility": 0.25,
    "clarity": 0.20,
    "impact": 0.25,
}


def internal_weighted_total(novelty: float, feasibility: float, clarity: float,
                            impact: float) -> float:
    return weighted_sum([
        (INTERNAL_WEIGHTS["novelty"], novelty),
        (INTERNAL_WEIGHTS["feasibility"], feasibility),
        (INTERNAL_WEIGHTS["clarity"], clarity),
        (INTERNAL_WEIGHTS["impact"], impact),
    ])


@dataclass(frozen=True)
class CriteriaScores:
    novelty: float
    feasibility: float
    clarity: float
    impact: float
    weighted_total: float

    @classmethod
    def build(cls, novelty: float, feasibility: float, clarity: float,
              impact: float) -> "CriteriaScores":
        return cls(
            novelty=novelty,
            feasibility=feasibility,
            clarity=clarity,
            impact=impact,
            weighted_total=internal_weighted_total(novelty, feasibility, clarity, impact),
        )

    def to_dict(self) -> dict:
        return {
            "novelty": self.novelty,
            "feasibility": self.feasibility,
            "clarity": self.clarity,
            "impact": self.impact,
            "weighted_total": self.weighted_total,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CriteriaScores":
        return cls(**data)


# Band boundaries for idea-vs-literature similarity.
BAND_LOW_BELOW = 0.3
BAND_MID_LOW = 0.5
BAND_MID_HIGH = 0.7


def similarity_band(max_similarity: float) -> str:
    if max_similarity < BAND_LOW_BELOW:
        return "low"
    if max_similarity > BAND_MID_HIGH:
        return "high"
    if BAND_MID_LOW <= max_similarity <= BAND_MID_HIGH:
        return "mid"
    return "other"  # the unnamed [0.3, 0.5) range


@dataclass(frozen=True)
class SimilarityVerdict:
    idea_id: str
    max_similarity: float
    band: str
    top_overlaps: tuple[tuple[str, float], ...]  # (paper_id, similarity), descending

    def to_dict(self) -> dict:
        return {
            "idea_id": self.idea_id,
            "max_similarity": self.max_similarity,
            "band": self.band,
            "top_overlaps": [[pid, sim] for pid, sim in self.top_overlaps],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SimilarityVerdict":
        return cls(
            idea_id=data["idea_id"],
            max_similarity=data["max_similarity"],
            band=data["band"],
            top_overlaps=tuple((pid, sim) for pid, sim in data["top_overlaps"]),
        )
