"""Portfolio assembly from the fused evaluations."""

from __future__ import annotations

from collections import Counter

from .models import HIGH_QUALITY_THRESHOLD, PortfolioReport, UnifiedEvaluation, portfolio_band


def _top_suggestions(pools: list[tuple[str, ...]], limit: int) -> list[str]:
    """Most frequent suggestions first; ties keep first-occurrence order."""
    counts: Counter[str] = Counter()
    first_seen: dict[str, int] = {}
    original: dict[str, str] = {}
    position = 0
    for pool in pools:
        for suggestion in pool:
            key = suggestion.strip().casefold()
            if not key:
                continue
            counts[key] += 1
            if key not in first_seen:
                first_seen[key] = position
                original[key] = suggestion.strip()
            position += 1
    ranked = sorted(counts, key=lambda key: (-counts[key], first_seen[key]))
    return [original[key] for key in ranked[:limit]]


def build_portfolio(evaluations: list[UnifiedEvaluation], target: int, *,
                    high_quality_threshold: float = HIGH_QUALITY_THRESHOLD,
                    review_suggestion_count: int = 3,
                    novelty_suggestion_count: int = 2) -> PortfolioReport:
    """Rank, band, and select the final idea set.

    Everything strictly above the high-quality threshold is kept, even past
    the target; short portfolios fill with the next best by unified score.
    """
    assert evaluations, "build_portfolio requires at least one evaluation"
    ranked = sorted(evaluations, key=lambda e: (-e.unified, e.idea_id))
    high_quality = [e.idea_id for e in ranked if e.unified > high_quality_threshold]

    if len(high_quality) >= target:
        selected = list(high_quality)
    else:
        selected = list(high_quality)
        for evaluation in ranked:
            if len(selected) >= min(target, len(ranked)):
                break
            if evaluation.idea_id not in selected:
                selected.append(evaluation.idea_id)

    unified_values = [e.unified for e in ranked]
    return PortfolioReport(
        ranked=ranked,
        high_quality_ids=high_quality,
        selected_ids=selected,
        bands={e.idea_id: portfolio_band(e.unified) for e in ranked},
        statistics={
            "mean_unified": sum(unified_values) / len(unified_values),
            "min_unified": min(unified_values),
            "max_unified": max(unified_values),
            "count": float(len(ranked)),
            "good_count": float(sum(1 for value in unified_values if value >= 4.0)),
        },
        review_suggestions=_top_suggestions(
            [e.review.suggestions for e in ranked], review_suggestion_count),
        novelty_suggestions=_top_suggestions(
            [e.novelty.suggestions for e in ranked], novelty_suggestion_count),
    )
