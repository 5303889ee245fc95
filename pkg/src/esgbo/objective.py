"""ESG-penalized Sharpe-ratio fitness on the portfolio simplex.

The fitness is ``norm(sharpe) + g(norm(esg))`` where both factors are
min-max normalized to [0, 1] (clamped), so the fitness lives in [0, 2].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConfigError, DegenerateRiskError, MalformedInputError
from .esg import EsgTotal, portfolio_esg
from .market_data import ReturnStats

SIMPLEX_TOL = 1e-9


@dataclass(frozen=True)
class PortfolioWeights:
    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        object.__setattr__(self, "w", w)
        check_simplex(w)

    def __array__(self, dtype=None, copy=None):
        return self.w if dtype is None else self.w.astype(dtype)

    def __len__(self):
        return len(self.w)


def check_simplex(w: np.ndarray) -> None:
    if w.ndim != 1 or w.size == 0:
        raise MalformedInputError("weights must be a non-empty vector")
    if np.any(~np.isfinite(w)) or np.any(w < 0) or np.any(w > 1):
        raise MalformedInputError(f"weights must lie in [0, 1], got {w}")
    if abs(w.sum() - 1.0) > SIMPLEX_TOL:
        raise MalformedInputError(f"weights sum to {w.sum():.12g}, not 1")


@dataclass(frozen=True)
class ObjectiveConfig:
    risk_free: float
    sharpe_min: float
    sharpe_max: float
    esg_min: float = 0.0
    esg_max: float = 10.0
    esg_log_transform: bool = False

    def __post_init__(self):
        if not self.sharpe_min < self.sharpe_max:
            raise ConfigError(
                f"sharpe_min ({self.sharpe_min}) must be below sharpe_max ({self.sharpe_max})")
        if not self.esg_min < self.esg_max:
            raise ConfigError(f"esg_min ({self.esg_min}) must be below esg_max ({self.esg_max})")


def _weights(weights) -> np.ndarray:
    if isinstance(weights, PortfolioWeights):
        return weights.w
    w = np.asarray(weights, dtype=float)
    check_simplex(w)
    return w


def sharpe_ratio(weights, stats: ReturnStats, risk_free: float) -> float:
    """``(w . r - r_f) / sqrt(w' Cov w)``."""
    w = _weights(weights)
    if w.size != stats.n_assets:
        raise MalformedInputError(f"{w.size} weights for {stats.n_assets} assets")
    var = float(w @ stats.covariance @ w)
    if not var > 0.0:
        raise DegenerateRiskError(f"portfolio variance is {var:g} at weights {w}")
    return (float(w @ stats.mean_returns) - risk_free) / math.sqrt(var)


def sharpe_gradient(weights, stats: ReturnStats, risk_free: float) -> np.ndarray:
    """Gradient of :func:`sharpe_ratio` with respect to the raw weights."""
    w = _weights(weights)
    cw = stats.covariance @ w
    var = float(w @ cw)
    if not var > 0.0:
        raise DegenerateRiskError(f"portfolio variance is {var:g} at weights {w}")
    sd = math.sqrt(var)
    excess = float(w @ stats.mean_returns) - risk_free
    return stats.mean_returns / sd - excess * cw / (sd * var)


def normalize(value: float, lo: float, hi: float) -> float:
    """Map ``[lo, hi]`` onto ``[0, 1]``, clamping values outside the range."""
    if not lo < hi:
        raise ConfigError(f"normalization bounds must satisfy lo < hi, got [{lo}, {hi}]")
    if value <= lo:
        return 0.0
    if value >= hi:
        return 1.0
    # reciprocal scaling lands on the decimal fixed points (8.7 on [0, 10] -> 0.87)
    return min((value - lo) * (1.0 / (hi - lo)), 1.0)


def log_esg_transform(u: float) -> float:
    """Concave rescaling ``ln(1 + u (e - 1))``; fixes 0 and 1."""
    if u <= 0.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    return math.log1p(u * (math.e - 1.0))


def fitness(weights, stats: ReturnStats, esg_totals: Sequence[EsgTotal | float],
            cfg: ObjectiveConfig) -> float:
    w = _weights(weights)
    if len(esg_totals) != stats.n_assets:
        raise MalformedInputError(
            f"{len(esg_totals)} ESG totals for {stats.n_assets} assets")
    s = normalize(sharpe_ratio(w, stats, cfg.risk_free), cfg.sharpe_min, cfg.sharpe_max)
    e = normalize(portfolio_esg(w, esg_totals), cfg.esg_min, cfg.esg_max)
    if cfg.esg_log_transform:
        e = log_esg_transform(e)
    return s + e


class PortfolioObjective:
    """Picklable fitness evaluator bound to fixed stats, ESG totals and config."""

    def __init__(self, stats: ReturnStats, esg_totals: Sequence[EsgTotal | float],
                 cfg: ObjectiveConfig):
        if len(esg_totals) != stats.n_assets:
            raise MalformedInputError(
                f"{len(esg_totals)} ESG totals for {stats.n_assets} assets")
        self.stats = stats
        self.esg_totals = tuple(
            t.total if isinstance(t, EsgTotal) else float(t) for t in esg_totals)
        self.cfg = cfg

    @property
    def n_assets(self) -> int:
        return self.stats.n_assets

    def __call__(self, weights) -> float:
        return fitness(weights, self.stats, self.esg_totals, self.cfg)
