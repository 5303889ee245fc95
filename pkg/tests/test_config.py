import textwrap

import numpy as np
import pytest

from esgbo.config import apply_overrides, load_settings, parse_floats, parse_matrix
from esgbo.errors import ConfigError, MalformedInputError

INLINE = """
[asset.A]
mean_return = 0.001
esg_total = 6

[asset.B]
mean_return = 0.002
esg_categories = 5,5,5,5,5,5,5,5,5,5,5,5,5,9

[market]
covariance = 0.0004, 0.0001; 0.0001, 0.0009

[objective]
risk_free = 0.0
sharpe_min = -1
sharpe_max = 1
"""


def write(tmp_path, text, name="c.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return path


class TestParsing:
    def test_floats(self):
        np.testing.assert_array_equal(parse_floats("1, 2.5,[3]"), [1, 2.5, 3])

    def test_matrix(self):
        np.testing.assert_array_equal(parse_matrix("1,2;3,4"), [[1, 2], [3, 4]])
        with pytest.raises(ConfigError):
            parse_matrix("1,2;3")

    def test_bad_number(self):
        with pytest.raises(ConfigError):
            parse_floats("1, x")


class TestSettings:
    def test_inline_market(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE))
        stats = s.return_stats()
        assert stats.asset_names == ("A", "B")
        np.testing.assert_array_equal(stats.mean_returns, [0.001, 0.002])
        totals = s.esg_totals()
        assert totals[0].total == 6.0
        assert totals[1].total == pytest.approx((13 * 5 + 9) / 14)

    def test_defaults(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE))
        cfg = s.objective_config()
        assert (cfg.esg_min, cfg.esg_max, cfg.esg_log_transform) == (0.0, 10.0, False)
        run = s.run_config(2)
        assert (run.budget, run.n_acq_candidates, run.acquisition.kind) == (25, 1000, "UCB")
        assert run.random_search_draws is None
        assert s.experiment() == {"repetitions": 25, "base_seed": 0, "workers": 1}

    def test_overrides(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE),
                          ["run.budget=3", "asset.A.esg_total=9.5", "objective.esg_log_transform=yes"])
        assert s.run_config(2).budget == 3
        assert s.esg_totals()[0].total == 9.5
        assert s.objective_config().esg_log_transform is True

    @pytest.mark.parametrize("bad", ["run.budget", "budget=3"])
    def test_malformed_override(self, tmp_path, bad):
        with pytest.raises(ConfigError):
            load_settings(write(tmp_path, INLINE), [bad])

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigError, match="budgett"):
            load_settings(write(tmp_path, INLINE), ["run.budgett=3"])

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ConfigError, match="solver"):
            load_settings(write(tmp_path, INLINE + "\n[solver]\nx = 1\n"))

    def test_bad_value(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE), ["run.budget=many"])
        with pytest.raises(ConfigError, match="run.budget"):
            s.run_config(2)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="nope.ini"):
            load_settings(tmp_path / "nope.ini")

    def test_out_of_range_category(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE),
                          ["asset.B.esg_categories=11,5,5,5,5,5,5,5,5,5,5,5,5,5"])
        with pytest.raises(MalformedInputError, match="outside"):
            s.esg_totals()

    def test_prices_relative_to_config(self, tmp_path):
        (tmp_path / "data").mkdir()
        (tmp_path / "data" / "p.csv").write_text(
            "date,asset,price\n2021-03-01,A,1\n2021-03-01,B,2\n2021-03-02,A,1.1\n"
            "2021-03-02,B,1.9\n2021-03-03,A,1.0\n2021-03-03,B,2.1\n")
        text = INLINE.replace("covariance = 0.0004, 0.0001; 0.0001, 0.0009", "prices = data/p.csv")
        stats = load_settings(write(tmp_path, text)).return_stats()
        assert stats.mean_returns[0] == pytest.approx((0.1 + (1.0 / 1.1 - 1)) / 2)

    def test_prices_missing_asset(self, tmp_path):
        (tmp_path / "p.csv").write_text("date,asset,price\n2021-03-01,A,1\n2021-03-02,A,2\n")
        text = INLINE.replace("covariance = 0.0004, 0.0001; 0.0001, 0.0009", "prices = p.csv")
        with pytest.raises(ConfigError, match="B"):
            load_settings(write(tmp_path, text)).return_stats()

    def test_gen_data_from_volatilities(self, tmp_path):
        s = load_settings(write(tmp_path, INLINE + "\n[gen_data]\nvolatilities = 0.01, 0.02\n"
                                "correlation = 0.5\n"))
        spec = s.gen_data()
        np.testing.assert_allclose(spec["covariance"], [[1e-4, 1e-4], [1e-4, 4e-4]])
        assert spec["n_days"] == 252 and spec["target_means"] == [0.001, 0.002]


def test_shipped_configs_load():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "configs"
    for name in ("utilities.ini", "utilities_esg_spread.ini"):
        s = load_settings(root / name)
        assert s.asset_names() == ["Endesa", "Iberdrola", "Repsol"]
        s.return_stats()
        s.objective_config()
    assert [t.total for t in load_settings(root / "utilities_esg_spread.ini").esg_totals()] == [9, 5, 2]
