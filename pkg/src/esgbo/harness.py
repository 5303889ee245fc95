"""Repeated BO vs random-search experiments and their CSV traces.

Repetition ``r`` runs both methods with seed ``base_seed + r``, so the two
methods share their first evaluated point. Per-iteration best-so-far values
are aggregated into mean and sample standard deviation curves.
"""
from __future__ import annotations

import csv
import datetime as dt
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, EsgboError, MalformedInputError
from .market_data import PriceSeries
from .optimizer import RunConfig, RunTrace, Transform, bo_run, box_to_simplex, random_search_run

log = logging.getLogger(__name__)

METHODS: dict[str, Callable[..., RunTrace]] = {"bo": bo_run, "random": random_search_run}
TRACE_HEADER = ("method", "iteration", "mean_best", "std_best")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class ExperimentConfig:
    run: RunConfig
    objective: Callable[[np.ndarray], float]
    repetitions: int = 25
    base_seed: int = 0
    methods: tuple[str, ...] = ("bo", "random")
    transform: Transform = box_to_simplex
    workers: int = 1

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ConfigError(f"unknown methods: {sorted(unknown)}")


@dataclass
class MethodCurves:
    method: str
    mean_best: np.ndarray
    std_best: np.ndarray
    repetitions: list[int] = field(default_factory=list)
    traces: list[RunTrace] = field(default_factory=list)
    failures: list[tuple[int, str]] = field(default_factory=list)

    @property
    def final_best(self) -> np.ndarray:
        return np.array([t.best_fitness for t in self.traces])

    @property
    def recommendations(self) -> list[np.ndarray]:
        return [t.recommendation for t in self.traces]


@dataclass
class AggregateCurves:
    methods: dict[str, MethodCurves]

    def __getitem__(self, method: str) -> MethodCurves:
        return self.methods[method]

    @property
    def failure_count(self) -> int:
        return sum(len(m.failures) for m in self.methods.values())


def aggregate(best_so_far: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    """Per-iteration mean and sample std (zero for a single repetition)."""
    B = np.vstack(best_so_far)
    mean = B.mean(axis=0)
    std = B.std(axis=0, ddof=1) if B.shape[0] > 1 else np.zeros(B.shape[1])
    return mean, std


def _one_run(method: str, objective, run_cfg: RunConfig, transform) -> RunTrace:
    return METHODS[method](objective, run_cfg, transform=transform)


def run_experiment(cfg: ExperimentConfig) -> AggregateCurves:
    jobs = [(m, r) for m in cfg.methods for r in range(cfg.repetitions)]

    def run_cfg(r):
        return replace(cfg.run, seed=cfg.base_seed + r)

    results: dict[tuple[str, int], RunTrace | BaseException] = {}
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            futures = {job: pool.submit(_one_run, job[0], cfg.objective, run_cfg(job[1]),
                                        cfg.transform) for job in jobs}
            for job, fut in futures.items():
                exc = fut.exception()
                results[job] = exc if exc is not None else fut.result()
    else:
        for m, r in jobs:
            try:
                results[(m, r)] = _one_run(m, cfg.objective, run_cfg(r), cfg.transform)
            except EsgboError as exc:
                results[(m, r)] = exc

    curves = {}
    for m in cfg.methods:
        mc = MethodCurves(m, np.empty(0), np.empty(0))
        for r in range(cfg.repetitions):
            res = results[(m, r)]
            if isinstance(res, BaseException):
                log.warning("%s repetition %d failed: %s", m, r, res)
                mc.failures.append((r, str(res)))
            else:
                mc.repetitions.append(r)
                mc.traces.append(res)
        if mc.traces:
            mc.mean_best, mc.std_best = aggregate([t.best_so_far for t in mc.traces])
        curves[m] = mc
    return AggregateCurves(curves)


def emit_traces(curves: AggregateCurves, path: str | Path) -> None:
    """Write ``method,iteration,mean_best,std_best`` rows (1-based iterations)."""
    path = Path(path)
    lines = [",".join(TRACE_HEADER)]
    for name, mc in curves.methods.items():
        for i, (m, s) in enumerate(zip(mc.mean_best, mc.std_best), start=1):
            lines.append(f"{name},{i},{_fmt(m)},{_fmt(s)}")
    _write_lines(path, lines)


def emit_detail(curves: AggregateCurves, path: str | Path) -> None:
    """Per-repetition rows: ``method,repetition,iteration,w_1..w_N,fitness,best_so_far``."""
    lines = None
    for name, mc in curves.methods.items():
        for rep, trace in zip(mc.repetitions, mc.traces):
            rows = detail_rows(name, rep, trace)
            if lines is None:
                lines = [rows[0]]
            lines.extend(rows[1:])
    _write_lines(Path(path), lines or [])


def emit_run_detail(method: str, repetition: int, trace: RunTrace, path: str | Path) -> None:
    _write_lines(Path(path), detail_rows(method, repetition, trace))


def detail_rows(method: str, repetition: int, trace: RunTrace) -> list[str]:
    n = trace.evaluations[0].weights.size if trace.evaluations else 0
    header = ["method", "repetition", "iteration", *(f"w_{i + 1}" for i in range(n)),
              "fitness", "best_so_far"]
    lines = [",".join(header)]
    for i, (ev, best) in enumerate(zip(trace.evaluations, trace.best_so_far), start=1):
        cells = [method, str(repetition), str(i), *map(_fmt, ev.weights),
                 _fmt(ev.fitness), _fmt(best)]
        lines.append(",".join(cells))
    return lines


def _write_lines(path: Path, lines: list[str]) -> None:
    try:
        with path.open("w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write trace file {path}: {exc}") from exc


def read_traces(path: str | Path) -> dict[str, tuple[np.ndarray, np.ndarray]]:
    """Parse a trace CSV back into ``{method: (mean_best, std_best)}``."""
    rows: dict[str, list[tuple[int, float, float]]] = {}
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header) != TRACE_HEADER:
            raise MalformedInputError(f"{path}: unexpected header {header}")
        for rec in reader:
            rows.setdefault(rec[0], []).append((int(rec[1]), float(rec[2]), float(rec[3])))
    out = {}
    for name, recs in rows.items():
        recs.sort()
        out[name] = (np.array([r[1] for r in recs]), np.array([r[2] for r in recs]))
    return out


def business_days(start: dt.date, n: int) -> list[dt.date]:
    days = np.busday_offset(np.datetime64(start, "D"), np.arange(n), roll="forward")
    return [d.astype(object) for d in days]


def generate_synthetic_prices(asset_names: Sequence[str], target_means: Sequence[float],
                              covariance, n_days: int = 252, seed: int = 0,
                              start_date: dt.date = dt.date(2021, 3, 1),
                              initial_price: float = 100.0) -> list[PriceSeries]:
    """Gaussian daily-return paths whose sample means equal ``target_means``.

    Returns are drawn from ``N(0, covariance)``, demeaned column-wise and
    shifted by the targets, then compounded from ``initial_price``. The
    realized covariance is the sample covariance of the drawn paths.
    """
    mu = np.asarray(target_means, dtype=float)
    cov = np.asarray(covariance, dtype=float)
    n = len(asset_names)
    if mu.shape != (n,) or cov.shape != (n, n):
        raise ConfigError(f"means {mu.shape} / covariance {cov.shape} do not match {n} assets")
    if n_days < 3:
        raise ConfigError(f"n_days must be >= 3, got {n_days}")
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        raise ConfigError("synthetic covariance must be positive definite") from None
    rng = np.random.default_rng(seed)
    R = rng.standard_normal((n_days - 1, n)) @ L.T
    R = R - R.mean(axis=0) + mu
    if np.any(R <= -1):
        raise ConfigError("synthetic returns below -100%; reduce the covariance scale")
    prices = initial_price * np.vstack([np.ones(n), np.cumprod(1.0 + R, axis=0)])
    dates = business_days(start_date, n_days)
    return [PriceSeries(name, dates, prices[:, i]) for i, name in enumerate(asset_names)]
