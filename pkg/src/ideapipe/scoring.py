"""Weighted-sum helper shared by every rubric in the pipeline.

Weights in this system are short decimals (0.30, 0.25, ...). Computing on an
integer-scaled grid keeps decimal inputs exact at decision boundaries (a
uniform 3.5 really sums to 3.5), which the threshold rules rely on. Weights
that do not land on the grid fall back to plain floating arithmetic.
"""

from __future__ import annotations


def weighted_sum(pairs: list[tuple[float, float]], scale: int = 100) -> float:
    """sum(weight * value) computed as sum(round(weight*scale) * value) / scale
    when every weight sits on the 1/scale grid."""
    scaled = []
    for weight, value in pairs:
        grid = round(weight * scale)
        if abs(grid / scale - weight) > 1e-12:
            return sum(w * v for w, v in pairs)
        scaled.append((grid, value))
    return sum(grid * value for grid, value in scaled) / scale


def mean(values: list[float]) -> float:
    return sum(values) / len(values)


def clamp(value: float, low: float, high: float) -> float:
    return max(low, min(high, value))
