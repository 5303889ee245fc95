"""Sequential Bayesian optimization and the random-search baseline.

Both searches work in the unit box ``[0, 1]^N`` and map each box point to
portfolio weights with :func:`box_to_simplex` before calling the objective.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .acquisition import AcquisitionSpec, maximize_acquisition
from .errors import ConfigError, RunAbortedError
from .gp import default_grid, fit, select_hyperparams

log = logging.getLogger(__name__)

Transform = Optional[Callable[[np.ndarray], np.ndarray]]


def box_to_simplex(u) -> np.ndarray:
    """Normalize a box point onto the simplex; near-zero input maps to uniform."""
    u = np.asarray(u, dtype=float)
    total = float(u.sum())
    if total < 1e-12:
        return np.full(u.size, 1.0 / u.size)
    w = u / total
    return w


@dataclass(frozen=True)
class RunConfig:
    n_assets: int
    budget: int = 25
    acquisition: AcquisitionSpec = field(default_factory=AcquisitionSpec)
    seed: int = 0
    n_acq_candidates: int = 1000
    random_search_draws: Optional[int] = None

    def __post_init__(self):
        if self.budget < 1:
            raise ConfigError(f"budget must be >= 1, got {self.budget}")
        if self.n_assets < 2:
            raise ConfigError(f"n_assets must be >= 2, got {self.n_assets}")
        if self.n_acq_candidates < 1:
            raise ConfigError(f"n_acq_candidates must be >= 1, got {self.n_acq_candidates}")
        if self.random_search_draws is not None and self.random_search_draws < 1:
            raise ConfigError("random_search_draws must be >= 1")


@dataclass(frozen=True)
class Evaluation:
    box_point: np.ndarray
    weights: np.ndarray
    fitness: float


@dataclass
class RunTrace:
    evaluations: list[Evaluation] = field(default_factory=list)

    @property
    def fitness(self) -> np.ndarray:
        return np.array([e.fitness for e in self.evaluations])

    @property
    def best_so_far(self) -> np.ndarray:
        return np.maximum.accumulate(self.fitness) if self.evaluations else np.empty(0)

    @property
    def best_index(self) -> int:
        # first occurrence of the maximum
        return int(np.argmax(self.fitness))

    @property
    def recommendation(self) -> np.ndarray:
        return self.evaluations[self.best_index].weights

    @property
    def best_fitness(self) -> float:
        return float(self.fitness.max())


def _evaluate(objective, transform: Transform, u: np.ndarray, trace: RunTrace, method: str):
    w = transform(u) if transform is not None else u.copy()
    try:
        f = float(objective(w))
    except Exception as exc:
        raise RunAbortedError(
            f"{method}: objective failed at evaluation {len(trace.evaluations) + 1}: {exc}",
            trace) from exc
    trace.evaluations.append(Evaluation(u.copy(), w, f))
    log.info("%s eval %d: fitness=%.6f weights=%s", method, len(trace.evaluations), f,
             np.array2string(w, precision=4))


def bo_run(objective, cfg: RunConfig, transform: Transform = box_to_simplex) -> RunTrace:
    """Bayesian optimization with a GP surrogate refit every iteration.

    The first point is uniform in the box; each later point maximizes the
    acquisition over a GP whose hyperparameters are re-selected by marginal
    likelihood on all previous evaluations. ``transform=None`` evaluates the
    objective on box points directly.
    """
    rng = np.random.default_rng(cfg.seed)
    D = cfg.n_assets
    trace = RunTrace()
    _evaluate(objective, transform, rng.random(D), trace, "bo")
    for _ in range(1, cfg.budget):
        X = np.array([e.box_point for e in trace.evaluations])
        y = trace.fitness
        params = select_hyperparams(X, y, default_grid(D), normalize_y=True)
        gp = fit(X, y, params, normalize_y=True)
        u = maximize_acquisition(gp, cfg.acquisition, float(y.max()), D, rng,
                                 cfg.n_acq_candidates)
        _evaluate(objective, transform, u, trace, "bo")
    return trace


def random_search_run(objective, cfg: RunConfig, transform: Transform = box_to_simplex) -> RunTrace:
    """Independent uniform box draws; the first draw matches :func:`bo_run`'s."""
    rng = np.random.default_rng(cfg.seed)
    n = cfg.random_search_draws or cfg.budget
    trace = RunTrace()
    for _ in range(n):
        _evaluate(objective, transform, rng.random(cfg.n_assets), trace, "random")
    return trace
