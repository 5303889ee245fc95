"""Command-line entry point: ``esgbo {optimize,compare,score,gen-data} CONFIG``."""
from __future__ import annotations

import argparse
import logging
import sys

from .config import load_settings
from .errors import ConfigError, EsgboError
from .esg import portfolio_esg
from .harness import (ExperimentConfig, emit_detail, emit_run_detail, emit_traces,
                      generate_synthetic_prices, run_experiment)
from .market_data import stats_from_series, write_price_csv
from .objective import PortfolioObjective, PortfolioWeights
from .optimizer import bo_run

def _settings(args):
    overrides = list(args.override or [])
    if args.seed is not None:
        overrides += [f"run.seed={args.seed}", f"experiment.base_seed={args.seed}",
                      f"gen_data.seed={args.seed}"]
    return load_settings(args.config, overrides)


def _objective(settings) -> PortfolioObjective:
    return PortfolioObjective(settings.return_stats(), settings.esg_totals(),
                              settings.objective_config())


def cmd_optimize(args) -> int:
    settings = _settings(args)
    objective = _objective(settings)
    run_cfg = settings.run_config(objective.n_assets)
    trace = bo_run(objective, run_cfg)
    names = settings.asset_names()
    width = max(len(n) for n in names)
    print(f"recommended portfolio (seed {run_cfg.seed}, {len(trace.evaluations)} evaluations):")
    for name, w in zip(names, trace.recommendation):
        print(f"  {name:<{width}}  {100 * w:5.1f}%")
    print(f"final fitness: {trace.best_fitness:.6f}")
    if args.output:
        emit_run_detail("bo", 0, trace, args.output)
    return 0


def cmd_compare(args) -> int:
    if not args.output:
        raise ConfigError("compare needs --output for the aggregate trace CSV")
    settings = _settings(args)
    objective = _objective(settings)
    exp = settings.experiment()
    cfg = ExperimentConfig(run=settings.run_config(objective.n_assets), objective=objective,
                           repetitions=exp["repetitions"], base_seed=exp["base_seed"],
                           workers=exp["workers"])
    curves = run_experiment(cfg)
    emit_traces(curves, args.output)
    if args.detail:
        emit_detail(curves, args.detail)
    for name, mc in curves.methods.items():
        if mc.traces:
            print(f"{name}: final mean best {mc.mean_best[-1]:.4f} +/- {mc.std_best[-1]:.4f}"
                  f" over {len(mc.traces)} repetitions")
        else:
            print(f"{name}: all repetitions failed")
    if curves.failure_count:
        print(f"failed repetitions: {curves.failure_count}", file=sys.stderr)
    return 0


def cmd_score(args) -> int:
    settings = _settings(args)
    totals = settings.esg_totals()
    width = max(len(t.firm_name) for t in totals)
    for t in totals:
        print(f"{t.firm_name:<{width}}  {t.total:.2f}")
    weights = settings.portfolio_weights()
    if weights is not None:
        print(f"portfolio ESG: {portfolio_esg(PortfolioWeights(weights).w, totals):.2f}")
    return 0


def cmd_gen_data(args) -> int:
    if not args.output:
        raise ConfigError("gen-data needs --output for the price CSV")
    settings = _settings(args)
    spec = settings.gen_data()
    series = generate_synthetic_prices(**spec)
    write_price_csv(args.output, series)
    stats = stats_from_series(series)
    print(f"wrote {len(series)} assets x {len(series[0].dates)} days to {args.output}")
    print("sample mean returns: " + ", ".join(f"{m:.6g}" for m in stats.mean_returns))
    print("realized sample covariance:")
    for row in stats.covariance:
        print("  " + "  ".join(f"{v: .6e}" for v in row))
    return 0


COMMANDS = {
    "optimize": cmd_optimize,
    "compare": cmd_compare,
    "score": cmd_score,
    "gen-data": cmd_gen_data,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="esgbo", description="Bayesian optimization of ESG-penalized Sharpe portfolios")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in [("optimize", "single BO run, print recommended weights"),
                        ("compare", "repeated BO vs random search, write mean/std traces"),
                        ("score", "print firm and portfolio ESG scores"),
                        ("gen-data", "write a synthetic price CSV with target mean returns")]:
        p = sub.add_parser(name, help=help_)
        p.add_argument("config", help="run-config INI file")
        p.add_argument("--seed", type=int, help="override every seed in the config")
        p.add_argument("--output", "-o", help="output file")
        p.add_argument("--override", action="append", metavar="SECTION.KEY=VALUE",
                       help="override a config value (repeatable)")
        p.add_argument("--verbose", "-v", action="store_true",
                       help="log every objective evaluation to stderr")
        if name == "compare":
            p.add_argument("--detail", help="also write per-repetition detail CSV here")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args)
    except (EsgboError, OSError) as exc:
        print(f"esgbo {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
