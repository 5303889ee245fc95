"""Bayesian optimization of ESG-penalized Sharpe-ratio portfolios."""
from .acquisition import AcquisitionSpec, expected_improvement, maximize_acquisition, upper_confidence_bound
from .esg import EsgScorecard, EsgTotal, portfolio_esg, scorecard_total
from .gp import GpSurrogate, KernelParams, Prediction, fit, kernel, log_marginal_likelihood, predict, select_hyperparams
from .harness import AggregateCurves, ExperimentConfig, emit_traces, run_experiment
from .market_data import PriceSeries, ReturnStats, compute_returns, estimate_stats
from .objective import ObjectiveConfig, PortfolioObjective, PortfolioWeights, fitness, normalize, sharpe_ratio
from .optimizer import RunConfig, RunTrace, bo_run, box_to_simplex, random_search_run

__version__ = "0.1.0"
