"""Exact Gaussian-process regression with a squared-exponential kernel.

A fitted :class:`GpSurrogate` is immutable: it caches the lower Cholesky
factor of ``K + noise * I`` and the solved weights ``alpha``. Refitting or
appending an observation returns a new surrogate.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular

from . import kernels
from .errors import ConfigError, MalformedInputError, NumericalConditioningError

JITTER_START = 1e-10
JITTER_MAX = 1e-4
LENGTHSCALE_FACTORS = (0.05, 0.1, 0.2, 0.5, 1.0)
NOISE_FLOOR = 1e-6


@dataclass(frozen=True)
class KernelParams:
    signal_variance: float
    lengthscales: tuple[float, ...]
    noise_variance: float = 0.0

    def __post_init__(self):
        ls = tuple(float(x) for x in np.atleast_1d(self.lengthscales))
        object.__setattr__(self, "lengthscales", ls)
        if not self.signal_variance > 0:
            raise ConfigError(f"signal_variance must be > 0, got {self.signal_variance}")
        if not ls or any(not x > 0 for x in ls):
            raise ConfigError(f"lengthscales must be > 0, got {ls}")
        if not self.noise_variance >= 0:
            raise ConfigError(f"noise_variance must be >= 0, got {self.noise_variance}")


@dataclass(frozen=True)
class Prediction:
    mean: float
    variance: float


@dataclass(frozen=True, eq=False)
class GpSurrogate:
    X: np.ndarray
    y: np.ndarray
    params: KernelParams
    chol: np.ndarray
    alpha: np.ndarray
    jitter: float = 0.0
    y_offset: float = 0.0
    y_scale: float = 1.0

    @property
    def n_train(self) -> int:
        return self.X.shape[0]


def kernel(x, x2, params: KernelParams) -> float:
    """``s2 * exp(-0.5 * sum(((x - x2) / l)^2))``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x.shape != x2.shape or x.size != len(params.lengthscales):
        raise MalformedInputError(
            f"kernel inputs {x.shape}/{x2.shape} vs {len(params.lengthscales)} lengthscales")
    z = (x - x2) / np.asarray(params.lengthscales)
    return params.signal_variance * math.exp(-0.5 * float(z @ z))


def _as_inputs(X, D=None) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None] if D in (None, 1) else X[None, :]
    if X.ndim != 2:
        raise MalformedInputError(f"inputs must be a matrix, got shape {X.shape}")
    return X


def _factorize(K: np.ndarray) -> tuple[np.ndarray, float]:
    try:
        return np.linalg.cholesky(K), 0.0
    except np.linalg.LinAlgError:
        pass
    jitter = JITTER_START
    eye = np.eye(K.shape[0])
    while jitter <= JITTER_MAX * (1 + 1e-9):
        try:
            return np.linalg.cholesky(K + jitter * eye), jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
    raise NumericalConditioningError(
        f"covariance of {K.shape[0]} points not positive definite with jitter up to {JITTER_MAX:g}")


def _standardize(y: np.ndarray, normalize_y: bool) -> tuple[float, float]:
    if not normalize_y:
        return 0.0, 1.0
    offset = float(y.mean())
    scale = float(y.std()) if y.size > 1 else 1.0
    return offset, (scale if scale > 0 else 1.0)


def fit(X, y, params: KernelParams, normalize_y: bool = False) -> GpSurrogate:
    """Condition the GP on ``(X, y)``.

    With ``normalize_y`` the targets are centred and scaled to unit standard
    deviation before fitting; :func:`predict` undoes the transform.
    """
    X = _as_inputs(X, len(params.lengthscales))
    y = np.asarray(y, dtype=float).ravel()
    if X.shape[0] < 1 or X.shape[0] != y.size:
        raise MalformedInputError(f"{X.shape[0]} inputs for {y.size} targets")
    if X.shape[1] != len(params.lengthscales):
        raise MalformedInputError(
            f"inputs have {X.shape[1]} dims but {len(params.lengthscales)} lengthscales")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
        raise MalformedInputError("training data must be finite")
    ls = np.asarray(params.lengthscales)
    K = kernels.se_kernel(X, X, ls, params.signal_variance)
    K[np.diag_indices_from(K)] += params.noise_variance
    chol, jitter = _factorize(K)
    offset, scale = _standardize(y, normalize_y)
    alpha = _solve_alpha(chol, (y - offset) / scale)
    return GpSurrogate(X, y, params, chol, alpha, jitter, offset, scale)


def _solve_alpha(chol, yt):
    z = solve_triangular(chol, yt, lower=True, check_finite=False)
    return solve_triangular(chol.T, z, lower=False, check_finite=False)


def append(gp: GpSurrogate, x, y_new: float) -> GpSurrogate:
    """Add one observation by extending the cached Cholesky factor.

    Falls back to a full refit when the bordered factor is not positive
    definite or the surrogate was fitted with jitter.
    """
    x = np.asarray(x, dtype=float).reshape(1, -1)
    X = np.vstack([gp.X, x])
    y = np.append(gp.y, float(y_new))
    normalize_y = not (gp.y_offset == 0.0 and gp.y_scale == 1.0)
    if gp.jitter:
        return fit(X, y, gp.params, normalize_y)
    ls = np.asarray(gp.params.lengthscales)
    k = kernels.se_kernel(gp.X, x, ls, gp.params.signal_variance)[:, 0]
    c = solve_triangular(gp.chol, k, lower=True, check_finite=False)
    d2 = gp.params.signal_variance + gp.params.noise_variance - float(c @ c)
    if not d2 > 0:
        return fit(X, y, gp.params, normalize_y)
    t = gp.n_train
    chol = np.zeros((t + 1, t + 1))
    chol[:t, :t] = gp.chol
    chol[t, :t] = c
    chol[t, t] = math.sqrt(d2)
    offset, scale = _standardize(y, normalize_y)
    alpha = _solve_alpha(chol, (y - offset) / scale)
    return GpSurrogate(X, y, gp.params, chol, alpha, 0.0, offset, scale)


def predict_many(gp: GpSurrogate, Xstar) -> tuple[np.ndarray, np.ndarray]:
    """Predictive means and variances (in target units) at each row of ``Xstar``."""
    Xstar = _as_inputs(Xstar, gp.X.shape[1])
    if Xstar.shape[1] != gp.X.shape[1]:
        raise MalformedInputError(f"test points have {Xstar.shape[1]} dims, expected {gp.X.shape[1]}")
    mean, var = kernels.gp_posterior(gp.X, gp.chol, gp.alpha,
                                     np.asarray(gp.params.lengthscales),
                                     gp.params.signal_variance, Xstar)
    return mean * gp.y_scale + gp.y_offset, var * gp.y_scale ** 2


def predict(gp: GpSurrogate, xstar) -> Prediction:
    mean, var = predict_many(gp, np.asarray(xstar, dtype=float).reshape(1, -1))
    return Prediction(float(mean[0]), float(var[0]))


def log_marginal_likelihood(gp: GpSurrogate) -> float:
    """Log evidence of the (standardized, if enabled) targets under the fit."""
    yt = (gp.y - gp.y_offset) / gp.y_scale
    t = gp.n_train
    return (-0.5 * float(yt @ gp.alpha)
            - float(np.log(np.diag(gp.chol)).sum())
            - 0.5 * t * math.log(2 * math.pi))


def select_hyperparams(X, y, grid: Sequence[KernelParams],
                       normalize_y: bool = False) -> KernelParams:
    """Grid member with the highest log marginal likelihood (first wins ties)."""
    best, best_lml = None, -math.inf
    for params in grid:
        try:
            lml = log_marginal_likelihood(fit(X, y, params, normalize_y))
        except NumericalConditioningError:
            continue
        if best is None or lml > best_lml:
            best, best_lml = params, lml
    if best is None:
        if not grid:
            raise ConfigError("hyperparameter grid is empty")
        raise NumericalConditioningError("no grid member produced a usable factorization")
    return best


def default_grid(dim: int, y=None, ranges=None, normalize_y: bool = True,
                 noise_variance: float = NOISE_FLOOR) -> list[KernelParams]:
    """Log-spaced lengthscale grid, one factor per dimension.

    Lengthscales are ``LENGTHSCALE_FACTORS * range`` per dimension (unit box
    by default). The signal variance is 1 for standardized targets and the
    sample variance of ``y`` otherwise.
    """
    ranges = np.ones(dim) if ranges is None else np.asarray(ranges, dtype=float)
    if normalize_y or y is None or len(y) < 2:
        signal = 1.0
    else:
        signal = float(np.var(y, ddof=1)) or 1.0
    return [KernelParams(signal, tuple(f * r for f, r in zip(combo, ranges)), noise_variance)
            for combo in itertools.product(LENGTHSCALE_FACTORS, repeat=dim)]
