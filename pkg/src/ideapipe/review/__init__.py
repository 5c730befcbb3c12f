from .models import (
    ACCEPT_THRESHOLD,
    HIGH_QUALITY_THRESHOLD,
    MINOR_REVISION_THRESHOLD,
    NOVELTY_DIMS,
    REVIEW_DIMS,
    REVIEW_WEIGHTS,
    NoveltyReport,
    PortfolioReport,
    ReviewReport,
    UnifiedEvaluation,
    novelty_band,
    portfolio_band,
    review_decision,
    review_overall,
    unified_score,
)
from .panel import aggregate, assess_novelty, review_idea
from .portfolio import build_portfolio

__all__ = [
    "ACCEPT_THRESHOLD",
    "HIGH_QUALITY_THRESHOLD",
    "MINOR_REVISION_THRESHOLD",
    "NOVELTY_DIMS",
    "REVIEW_DIMS",
    "REVIEW_WEIGHTS",
    "NoveltyReport",
    "PortfolioReport",
    "ReviewReport",
    "UnifiedEvaluation",
    "aggregate",
    "assess_novelty",
    "build_portfolio",
    "novelty_band",
    "portfolio_band",
    "review_decision",
    "review_idea",
    "review_overall",
    "unified_score",
]
