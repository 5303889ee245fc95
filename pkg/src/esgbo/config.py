"""INI run-config parsing with dotted ``section.key=value`` overrides.

Layout (every section optional unless a subcommand needs it)::

    [asset.Endesa]            ; one section per asset, in portfolio order
    mean_return = -0.00051     ; used by inline stats and gen-data
    esg_total = 8.7            ; or esg_categories = 14 comma-separated reals
    ; esg_category_weights = 14 reals summing to 1 (default uniform)

    [market]
    prices = prices.csv        ; date,asset,price CSV, relative to this file
    ; covariance = row1; row2; ...   (inline alternative to prices)

    [objective]  risk_free, sharpe_min, sharpe_max, esg_min, esg_max, esg_log_transform
    [run]        budget, acquisition, ei_epsilon, ucb_beta, seed, n_acq_candidates,
                 random_search_draws
    [experiment] repetitions, base_seed, workers
    [gen_data]   volatilities, correlation | covariance, n_days, seed, start_date,
                 initial_price
    [portfolio]  weights
"""
from __future__ import annotations

import configparser
import datetime as dt
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .acquisition import AcquisitionSpec
from .errors import ConfigError
from .esg import EsgScorecard, EsgTotal, scorecard_total, uniform_category_weights
from .market_data import ReturnStats, read_price_csv, stats_from_series
from .objective import ObjectiveConfig
from .optimizer import RunConfig

ASSET_PREFIX = "asset."

KNOWN_KEYS = {
    "market": {"prices", "covariance"},
    "objective": {"risk_free", "sharpe_min", "sharpe_max", "esg_min", "esg_max",
                  "esg_log_transform"},
    "run": {"budget", "acquisition", "ei_epsilon", "ucb_beta", "seed", "n_acq_candidates",
            "random_search_draws"},
    "experiment": {"repetitions", "base_seed", "workers"},
    "gen_data": {"volatilities", "correlation", "covariance", "n_days", "seed",
                 "start_date", "initial_price"},
    "portfolio": {"weights"},
}
ASSET_KEYS = {"mean_return", "esg_total", "esg_categories", "esg_category_weights",
              "esg_category_labels"}


def parse_floats(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.replace("[", "").replace("]", "").split(",")
                         if x.strip()])
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}") from None


def parse_matrix(text: str) -> np.ndarray:
    rows = [parse_floats(r) for r in text.split(";") if r.strip()]
    if not rows or len({r.size for r in rows}) != 1:
        raise ConfigError(f"matrix rows must have equal length: {text!r}")
    return np.vstack(rows)


@dataclass(frozen=True)
class AssetSpec:
    name: str
    mean_return: Optional[float]
    esg: Optional[EsgTotal]
    scorecard: Optional[EsgScorecard]


class Settings:
    """Typed view over a parsed run-config."""

    def __init__(self, parser: configparser.ConfigParser, base_dir: Path, source: str = "<config>"):
        self.parser = parser
        self.base_dir = base_dir
        self.source = source
        self._validate_keys()

    def _validate_keys(self):
        for section in self.parser.sections():
            if section.startswith(ASSET_PREFIX):
                known = ASSET_KEYS
            elif section in KNOWN_KEYS:
                known = KNOWN_KEYS[section]
            else:
                raise ConfigError(f"{self.source}: unknown section [{section}]")
            extra = set(self.parser[section]) - known
            if extra:
                raise ConfigError(f"{self.source}: unknown keys in [{section}]: {sorted(extra)}")

    def _get(self, section, key, conv, default=None):
        if not self.parser.has_option(section, key):
            if default is None:
                raise ConfigError(f"{self.source}: missing {section}.{key}")
            return default
        raw = self.parser.get(section, key)
        try:
            if conv is bool:
                return self.parser.getboolean(section, key)
            return conv(raw)
        except (ValueError, configparser.Error):
            raise ConfigError(f"{self.source}: bad value for {section}.{key}: {raw!r}") from None

    def has(self, section, key) -> bool:
        return self.parser.has_option(section, key)

    def path(self, section, key) -> Path:
        p = Path(self._get(section, key, str))
        return p if p.is_absolute() else self.base_dir / p

    # assets ------------------------------------------------------------
    def asset_names(self) -> list[str]:
        names = [s[len(ASSET_PREFIX):] for s in self.parser.sections()
                 if s.startswith(ASSET_PREFIX)]
        if not names:
            raise ConfigError(f"{self.source}: no [asset.NAME] sections")
        return names

    def assets(self) -> list[AssetSpec]:
        out = []
        for name in self.asset_names():
            sec = ASSET_PREFIX + name
            mean = self._get(sec, "mean_return", float, default=np.nan)
            mean = None if np.isnan(mean) else mean
            card = None
            if self.has(sec, "esg_categories"):
                weights = (self._get(sec, "esg_category_weights", parse_floats)
                           if self.has(sec, "esg_category_weights") else uniform_category_weights())
                labels = None
                if self.has(sec, "esg_category_labels"):
                    labels = tuple(x.strip() for x in
                                   self.parser.get(sec, "esg_category_labels").split(","))
                card = EsgScorecard(name, self._get(sec, "esg_categories", parse_floats),
                                    weights, labels)
            total = None
            if self.has(sec, "esg_total"):
                total = EsgTotal(name, self._get(sec, "esg_total", float))
            elif card is not None:
                total = scorecard_total(card)
            out.append(AssetSpec(name, mean, total, card))
        return out

    def esg_totals(self) -> list[EsgTotal]:
        totals = []
        for a in self.assets():
            if a.esg is None:
                raise ConfigError(
                    f"{self.source}: asset {a.name} needs esg_total or esg_categories")
            totals.append(a.esg)
        return totals

    # market ------------------------------------------------------------
    def return_stats(self) -> ReturnStats:
        names = self.asset_names()
        if self.has("market", "prices"):
            path = self.path("market", "prices")
            series = {s.asset_name: s for s in read_price_csv(path)}
            missing = [n for n in names if n not in series]
            if missing:
                raise ConfigError(f"{path}: no prices for assets {missing}")
            return stats_from_series([series[n] for n in names])
        if self.has("market", "covariance"):
            assets = self.assets()
            if any(a.mean_return is None for a in assets):
                raise ConfigError(f"{self.source}: inline covariance needs mean_return per asset")
            return ReturnStats(tuple(names), [a.mean_return for a in assets],
                               self._get("market", "covariance", parse_matrix))
        raise ConfigError(f"{self.source}: [market] needs prices or covariance")

    # objective / run ---------------------------------------------------
    def objective_config(self) -> ObjectiveConfig:
        return ObjectiveConfig(
            risk_free=self._get("objective", "risk_free", float),
            sharpe_min=self._get("objective", "sharpe_min", float),
            sharpe_max=self._get("objective", "sharpe_max", float),
            esg_min=self._get("objective", "esg_min", float, 0.0),
            esg_max=self._get("objective", "esg_max", float, 10.0),
            esg_log_transform=self._get("objective", "esg_log_transform", bool, False),
        )

    def acquisition_spec(self) -> AcquisitionSpec:
        return AcquisitionSpec(
            kind=self._get("run", "acquisition", str, "UCB"),
            ei_epsilon=self._get("run", "ei_epsilon", float, 0.01),
            ucb_beta=self._get("run", "ucb_beta", float, 2.0),
        )

    def run_config(self, n_assets: int) -> RunConfig:
        draws = self._get("run", "random_search_draws", int, 0) or None
        return RunConfig(
            n_assets=n_assets,
            budget=self._get("run", "budget", int, 25),
            acquisition=self.acquisition_spec(),
            seed=self._get("run", "seed", int, 0),
            n_acq_candidates=self._get("run", "n_acq_candidates", int, 1000),
            random_search_draws=draws,
        )

    def experiment(self) -> dict:
        return {
            "repetitions": self._get("experiment", "repetitions", int, 25),
            "base_seed": self._get("experiment", "base_seed", int, 0),
            "workers": self._get("experiment", "workers", int, 1),
        }

    # gen-data ----------------------------------------------------------
    def gen_data(self) -> dict:
        assets = self.assets()
        if any(a.mean_return is None for a in assets):
            raise ConfigError(f"{self.source}: gen-data needs mean_return for every asset")
        n = len(assets)
        if self.has("gen_data", "covariance"):
            cov = self._get("gen_data", "covariance", parse_matrix)
        else:
            vols = self._get("gen_data", "volatilities", parse_floats)
            if vols.size != n:
                raise ConfigError(f"{self.source}: {vols.size} volatilities for {n} assets")
            rho = self._get("gen_data", "correlation", float, 0.0)
            cov = rho * np.outer(vols, vols)
            np.fill_diagonal(cov, vols ** 2)
        return {
            "asset_names": [a.name for a in assets],
            "target_means": [a.mean_return for a in assets],
            "covariance": cov,
            "n_days": self._get("gen_data", "n_days", int, 252),
            "seed": self._get("gen_data", "seed", int, 0),
            "start_date": self._get("gen_data", "start_date", dt.date.fromisoformat,
                                    dt.date(2021, 3, 1)),
            "initial_price": self._get("gen_data", "initial_price", float, 100.0),
        }

    def portfolio_weights(self) -> Optional[np.ndarray]:
        if not self.has("portfolio", "weights"):
            return None
        return self._get("portfolio", "weights", parse_floats)


def apply_overrides(parser: configparser.ConfigParser, overrides: Iterable[str]) -> None:
    """Apply ``section.key=value`` overrides; the key is the last dotted part."""
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must be section.key=value, got {item!r}")
        path, value = item.split("=", 1)
        if "." not in path:
            raise ConfigError(f"override key must be dotted (section.key), got {path!r}")
        section, key = path.strip().rsplit(".", 1)
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value.strip())


def load_settings(path: str | Path, overrides: Iterable[str] = ()) -> Settings:
    path = Path(path)
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        with path.open(encoding="utf-8") as fh:
            parser.read_file(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    apply_overrides(parser, overrides)
    return Settings(parser, path.parent, str(path))

