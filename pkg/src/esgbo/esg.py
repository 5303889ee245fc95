"""Firm ESG totals from category scorecards, and portfolio-level ESG."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import MalformedInputError

N_CATEGORIES = 14
SCORE_MIN, SCORE_MAX = 0.0, 10.0


def uniform_category_weights() -> np.ndarray:
    return np.full(N_CATEGORIES, 1.0 / N_CATEGORIES)


@dataclass(frozen=True)
class EsgScorecard:
    """Fourteen category scores on the 0-10 scale plus their weights.

    Category identities are free-form labels; only count and ranges are
    checked.
    """

    firm_name: str
    category_scores: np.ndarray
    category_weights: np.ndarray = field(default_factory=uniform_category_weights)
    category_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        scores = np.asarray(self.category_scores, dtype=float)
        weights = np.asarray(self.category_weights, dtype=float)
        object.__setattr__(self, "category_scores", scores)
        object.__setattr__(self, "category_weights", weights)
        if scores.shape != (N_CATEGORIES,):
            raise MalformedInputError(
                f"{self.firm_name}: expected {N_CATEGORIES} category scores, got {scores.size}")
        if weights.shape != (N_CATEGORIES,):
            raise MalformedInputError(
                f"{self.firm_name}: expected {N_CATEGORIES} category weights, got {weights.size}")
        bad = np.flatnonzero(~np.isfinite(scores) | (scores < SCORE_MIN) | (scores > SCORE_MAX))
        if bad.size:
            k = int(bad[0])
            raise MalformedInputError(
                f"{self.firm_name}: category {k + 1} score {scores[k]:g} outside "
                f"[{SCORE_MIN:g}, {SCORE_MAX:g}]")
        if np.any(~np.isfinite(weights)) or np.any(weights < 0):
            raise MalformedInputError(f"{self.firm_name}: category weights must be >= 0")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise MalformedInputError(
                f"{self.firm_name}: category weights sum to {weights.sum():.12g}, not 1")
        if self.category_labels is not None and len(self.category_labels) != N_CATEGORIES:
            raise MalformedInputError(f"{self.firm_name}: expected {N_CATEGORIES} labels")


@dataclass(frozen=True)
class EsgTotal:
    firm_name: str
    total: float

    def __post_init__(self):
        t = float(self.total)
        if not np.isfinite(t) or t < SCORE_MIN or t > SCORE_MAX:
            raise MalformedInputError(
                f"{self.firm_name}: ESG total {self.total} outside [{SCORE_MIN:g}, {SCORE_MAX:g}]")
        object.__setattr__(self, "total", t)


def _convex(weights: np.ndarray, values: np.ndarray) -> float:
    # clip to the hull of the inputs so round-off never leaves [min, max]
    return float(np.clip(weights @ values, values.min(), values.max()))


def scorecard_total(card: EsgScorecard) -> EsgTotal:
    """Weighted sum of the category scores."""
    return EsgTotal(card.firm_name, _convex(card.category_weights, card.category_scores))


def portfolio_esg(weights: Sequence[float], totals: Sequence[EsgTotal | float]) -> float:
    """Weight-proportional average of the firm totals.

    ``totals`` may hold :class:`EsgTotal` objects or bare floats.
    """
    w = np.asarray(weights, dtype=float)
    t = np.array([x.total if isinstance(x, EsgTotal) else float(x) for x in totals])
    if w.shape != t.shape or w.ndim != 1 or w.size == 0:
        raise MalformedInputError(f"{w.size} weights for {t.size} ESG totals")
    return _convex(w, t)
