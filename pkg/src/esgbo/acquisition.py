"""Acquisition functions and their maximization over the unit box."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .errors import ConfigError
from .gp import GpSurrogate, Prediction, predict_many

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

N_STARTS = 5
INITIAL_STEP = 0.1
N_HALVINGS = 8
MAX_SWEEPS = 200


@dataclass(frozen=True)
class AcquisitionSpec:
    kind: str = "UCB"
    ei_epsilon: float = 0.01
    ucb_beta: float = 2.0

    def __post_init__(self):
        kind = str(self.kind).upper()
        object.__setattr__(self, "kind", kind)
        if kind not in ("EI", "UCB"):
            raise ConfigError(f"acquisition kind must be EI or UCB, got {self.kind!r}")
        if not self.ei_epsilon >= 0:
            raise ConfigError(f"ei_epsilon must be >= 0, got {self.ei_epsilon}")
        if not self.ucb_beta > 0:
            raise ConfigError(f"ucb_beta must be > 0, got {self.ucb_beta}")


def ei_values(mean, variance, incumbent: float, epsilon: float) -> np.ndarray:
    """Vectorized expected improvement for maximization."""
    mean = np.asarray(mean, dtype=float)
    s = np.sqrt(np.maximum(np.asarray(variance, dtype=float), 0.0))
    gap = mean - incumbent - epsilon
    out = np.maximum(gap, 0.0)
    pos = s > 0
    if np.any(pos):
        # subnormal s sends z*z to inf; exp(-inf) = 0 is the right limit
        with np.errstate(over="ignore"):
            z = gap[pos] / s[pos]
            ei = gap[pos] * ndtr(z) + s[pos] * _INV_SQRT_2PI * np.exp(-0.5 * z * z)
        out[pos] = np.maximum(ei, 0.0)
    return out


def ucb_values(mean, variance, beta: float) -> np.ndarray:
    return np.asarray(mean, dtype=float) + beta * np.sqrt(
        np.maximum(np.asarray(variance, dtype=float), 0.0))


def expected_improvement(pred: Prediction, incumbent: float, epsilon: float) -> float:
    """EI of ``pred`` over ``incumbent + epsilon``.

    ``(mu - best - eps) * Phi(z) + s * phi(z)`` with ``z = (mu - best - eps) / s``;
    for zero variance this collapses to ``max(mu - best - eps, 0)``.
    """
    return float(ei_values([pred.mean], [pred.variance], incumbent, epsilon)[0])


def upper_confidence_bound(pred: Prediction, beta: float) -> float:
    return float(ucb_values([pred.mean], [pred.variance], beta)[0])


def acquisition_values(gp: GpSurrogate, spec: AcquisitionSpec, incumbent: float,
                       points: np.ndarray) -> np.ndarray:
    mean, var = predict_many(gp, points)
    if spec.kind == "EI":
        return ei_values(mean, var, incumbent, spec.ei_epsilon)
    return ucb_values(mean, var, spec.ucb_beta)


def _hill_climb(score, x: np.ndarray, value: float) -> tuple[np.ndarray, float]:
    """Compass search: try +-step on every coordinate, move to the best
    strictly improving neighbour, halve the step when none improves."""
    D = x.size
    step = INITIAL_STEP
    for _ in range(N_HALVINGS + 1):
        for _ in range(MAX_SWEEPS):
            offsets = np.vstack([np.eye(D) * step, -np.eye(D) * step])
            nbrs = np.clip(x + offsets, 0.0, 1.0)
            vals = score(nbrs)
            k = int(np.argmax(vals))
            if not vals[k] > value:
                break
            x, value = nbrs[k], float(vals[k])
        step *= 0.5
    return x, value


def maximize_acquisition(gp: GpSurrogate, spec: AcquisitionSpec, incumbent: float,
                         box_dim: int, rng: np.random.Generator,
                         n_candidates: int = 1000) -> np.ndarray:
    """Random multi-start search for the acquisition argmax in ``[0, 1]^D``.

    ``n_candidates`` uniform points are scored; the best ``N_STARTS`` seed a
    coordinate hill climb. Ties resolve to the lowest candidate index.
    """
    if n_candidates < 1:
        raise ConfigError(f"n_candidates must be >= 1, got {n_candidates}")

    def score(points):
        return acquisition_values(gp, spec, incumbent, points)

    cands = rng.random((n_candidates, box_dim))
    vals = score(cands)
    starts = np.argsort(-vals, kind="stable")[:N_STARTS]
    best_x, best_v = cands[starts[0]], float(vals[starts[0]])
    for i in starts:
        x, v = _hill_climb(score, cands[i], float(vals[i]))
        if v > best_v:
            best_x, best_v = x, v
    return np.array(best_x, dtype=float)
