"""Price ingestion and return statistics.

Prices arrive as a long-format CSV (``date,asset,price``). Each asset becomes a
:class:`PriceSeries`; series are aligned on the exact intersection of their
dates, converted to simple returns and summarized by mean and sample
covariance.
"""
from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MalformedInputError

CSV_HEADER = ("date", "asset", "price")


@dataclass(frozen=True)
class PriceSeries:
    asset_name: str
    dates: tuple[dt.date, ...]
    prices: np.ndarray

    def __post_init__(self):
        prices = np.asarray(self.prices, dtype=float)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "dates", tuple(self.dates))
        if prices.ndim != 1 or len(prices) < 2:
            raise MalformedInputError(
                f"{self.asset_name}: need at least 2 prices, got {prices.size}")
        if len(self.dates) != len(prices):
            raise MalformedInputError(
                f"{self.asset_name}: {len(self.dates)} dates for {len(prices)} prices")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise MalformedInputError(f"{self.asset_name}: prices must be positive")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise MalformedInputError(
                f"{self.asset_name}: dates must be strictly increasing")


@dataclass(frozen=True)
class ReturnStats:
    """Per-asset mean returns and the return covariance matrix."""

    asset_names: tuple[str, ...]
    mean_returns: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mu = np.asarray(self.mean_returns, dtype=float)
        cov = np.asarray(self.covariance, dtype=float)
        object.__setattr__(self, "mean_returns", mu)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "asset_names", tuple(self.asset_names))
        n = len(self.asset_names)
        if mu.shape != (n,) or cov.shape != (n, n):
            raise MalformedInputError(
                f"stats shapes {mu.shape}/{cov.shape} do not match {n} assets")
        if not (np.all(np.isfinite(mu)) and np.all(np.isfinite(cov))):
            raise MalformedInputError("return statistics must be finite")
        if not np.allclose(cov, cov.T, rtol=0.0, atol=1e-12):
            raise MalformedInputError("covariance matrix is not symmetric")
        if np.any(np.diag(cov) < 0):
            raise MalformedInputError("covariance has a negative variance")
        if n and np.linalg.eigvalsh(cov).min() < -1e-10:
            raise MalformedInputError("covariance is not positive semidefinite")

    @property
    def n_assets(self) -> int:
        return len(self.asset_names)


def compute_returns(series: PriceSeries | Sequence[float]) -> np.ndarray:
    """Simple per-period returns ``p[t+1] / p[t] - 1``."""
    prices = series.prices if isinstance(series, PriceSeries) else np.asarray(series, float)
    if prices.ndim != 1 or prices.size < 2:
        raise MalformedInputError(f"need at least 2 prices, got {prices.size}")
    return prices[1:] / prices[:-1] - 1.0


def estimate_stats(aligned_returns: Sequence[Sequence[float]],
                   asset_names: Sequence[str] | None = None) -> ReturnStats:
    """Arithmetic means and unbiased (``T - 1``) sample covariance.

    Parameters
    ----------
    aligned_returns
        One return sequence per asset, all of the same length ``T >= 2``.
    asset_names
        Labels for the assets; defaults to ``asset_1 .. asset_N``.
    """
    rows = [np.asarray(r, dtype=float) for r in aligned_returns]
    if not rows:
        raise MalformedInputError("no assets given")
    lengths = {r.shape for r in rows}
    if len(lengths) != 1 or rows[0].ndim != 1:
        raise MalformedInputError(f"return series have mismatched lengths: {sorted(lengths)}")
    R = np.vstack(rows)
    T = R.shape[1]
    if T < 2:
        raise MalformedInputError(f"need at least 2 returns per asset, got {T}")
    if asset_names is None:
        asset_names = [f"asset_{i + 1}" for i in range(len(rows))]
    if len(asset_names) != len(rows):
        raise MalformedInputError("asset_names length does not match return series")
    mean = R.mean(axis=1)
    centered = R - mean[:, None]
    cov = centered @ centered.T / (T - 1)
    cov = 0.5 * (cov + cov.T)
    return ReturnStats(tuple(asset_names), mean, cov)


def align_series(series: Sequence[PriceSeries]) -> tuple[tuple[dt.date, ...], np.ndarray]:
    """Restrict every series to the dates present in all of them.

    Returns the shared dates and an ``(N, len(dates))`` price matrix.
    """
    if not series:
        raise MalformedInputError("no price series given")
    common = set(series[0].dates)
    for s in series[1:]:
        common &= set(s.dates)
    dates = tuple(sorted(common))
    if len(dates) < 2:
        raise MalformedInputError("fewer than 2 dates shared by all assets")
    prices = np.empty((len(series), len(dates)))
    for i, s in enumerate(series):
        lookup = dict(zip(s.dates, s.prices))
        prices[i] = [lookup[d] for d in dates]
    return dates, prices


def stats_from_series(series: Sequence[PriceSeries]) -> ReturnStats:
    _, prices = align_series(series)
    returns = [compute_returns(row) for row in prices]
    return estimate_stats(returns, [s.asset_name for s in series])


def read_price_csv(path: str | Path) -> list[PriceSeries]:
    """Parse a ``date,asset,price`` CSV into one series per asset.

    Assets keep the order of their first appearance in the file. Row numbers
    in diagnostics count the header as row 1.
    """
    path = Path(path)
    by_asset: dict[str, dict[dt.date, float]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise MalformedInputError(
                f"{path}: header must be {','.join(CSV_HEADER)}, got {header}")
        for rowno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise MalformedInputError(f"{path}: row {rowno}: expected 3 fields, got {len(row)}")
            date_s, asset, price_s = (f.strip() for f in row)
            try:
                date = dt.date.fromisoformat(date_s)
            except ValueError:
                raise MalformedInputError(f"{path}: row {rowno}: bad date {date_s!r}") from None
            try:
                price = float(price_s)
            except ValueError:
                raise MalformedInputError(f"{path}: row {rowno}: bad price {price_s!r}") from None
            if not np.isfinite(price) or price <= 0:
                raise MalformedInputError(
                    f"{path}: row {rowno}: price must be positive, got {price_s}")
            prices = by_asset.setdefault(asset, {})
            if date in prices:
                raise MalformedInputError(
                    f"{path}: row {rowno}: duplicate entry for ({date_s}, {asset})")
            prices[date] = price
    if not by_asset:
        raise MalformedInputError(f"{path}: no price rows")
    out = []
    for asset, prices in by_asset.items():
        dates = sorted(prices)
        out.append(PriceSeries(asset, dates, np.array([prices[d] for d in dates])))
    return out


def write_price_csv(path: str | Path, series: Sequence[PriceSeries]) -> None:
    """Write series in the long ``date,asset,price`` layout, date-major."""
    path = Path(path)
    rows = []
    for s in series:
        for d, p in zip(s.dates, s.prices):
            rows.append((d, s.asset_name, p))
    order = {s.asset_name: i for i, s in enumerate(series)}
    rows.sort(key=lambda r: (r[0], order[r[1]]))
    try:
        with path.open("w", newline="", encoding="utf-8") as fh:
            fh.write(",".join(CSV_HEADER) + "\n")
            for d, name, p in rows:
                fh.write(f"{d.isoformat()},{name},{p:.17g}\n")
    except OSError as exc:
        raise OSError(f"cannot write prices to {path}: {exc}") from exc
