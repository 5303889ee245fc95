import re
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from esgbo.cli import main
from esgbo.market_data import read_price_csv, stats_from_series

CONFIGS = Path(__file__).resolve().parents[1] / "configs"
UTILITIES = str(CONFIGS / "utilities.ini")
FAST = ["--override", "run.n_acq_candidates=200"]


class TestOptimize:
    def test_prints_weights_summing_to_100(self, capsys):
        assert main(["optimize", UTILITIES, "--seed", "4", "--override", "run.budget=8"]) == 0
        out = capsys.readouterr().out
        pct = [float(x) for x in re.findall(r"(-?\d+\.\d)%", out)]
        assert len(pct) == 3
        assert abs(sum(pct) - 100.0) <= 0.15
        assert "final fitness" in out

    def test_missing_config(self, capsys, tmp_path):
        missing = tmp_path / "absent.ini"
        assert main(["optimize", str(missing)]) == 2
        err = capsys.readouterr().err
        assert str(missing) in err

    def test_detail_output(self, tmp_path, capsys):
        out = tmp_path / "run.csv"
        assert main(["optimize", UTILITIES, "--override", "run.budget=4", "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "method,repetition,iteration,w_1,w_2,w_3,fitness,best_so_far"
        assert len(lines) == 5

    def test_budget_override_logs_one_evaluation(self):
        proc = subprocess.run(
            [sys.executable, "-m", "esgbo", "optimize", UTILITIES, "--override", "run.budget=1", "-v"],
            capture_output=True, text=True, check=True)
        assert len(re.findall(r"bo eval \d+:", proc.stderr)) == 1
        assert "bo eval" not in proc.stdout


class TestCompare:
    def _run(self, tmp_path, name, *extra):
        out = tmp_path / name
        code = main(["compare", UTILITIES, "-o", str(out), "--override", "experiment.repetitions=2",
                     "--override", "run.budget=3", *FAST, *extra])
        return code, out

    def test_row_count(self, tmp_path, capsys):
        code, out = self._run(tmp_path, "c.csv")
        assert code == 0
        assert len(out.read_text().splitlines()) == 1 + 6
        stdout = capsys.readouterr().out
        assert re.search(r"bo: final mean best \d\.\d{4} \+/- \d\.\d{4}", stdout)
        assert "random: final mean best" in stdout

    def test_byte_identical(self, tmp_path):
        _, a = self._run(tmp_path, "a.csv")
        _, b = self._run(tmp_path, "b.csv")
        assert a.read_bytes() == b.read_bytes()

    def test_detail_flag(self, tmp_path):
        detail = tmp_path / "d.csv"
        code, _ = self._run(tmp_path, "c.csv", "--detail", str(detail))
        assert code == 0
        assert len(detail.read_text().splitlines()) == 1 + 2 * 2 * 3

    def test_needs_output(self, capsys):
        assert main(["compare", UTILITIES]) == 2
        assert "--output" in capsys.readouterr().err


class TestScore:
    def test_scorecards(self, capsys):
        assert main(["score", str(CONFIGS / "scorecards.ini")]) == 0
        out = capsys.readouterr().out
        assert re.search(r"^Endesa\s+8\.70$", out, re.M)
        assert re.search(r"^Iberdrola\s+8\.97$", out, re.M)
        assert re.search(r"^Repsol\s+7\.32$", out, re.M)
        assert "portfolio ESG: 8.46" in out

    def test_direct_totals(self, capsys):
        assert main(["score", UTILITIES]) == 0
        assert "portfolio ESG: 8.46" in capsys.readouterr().out

    def test_out_of_range_category(self, capsys):
        bad = "asset.Endesa.esg_categories=11,9,9,9,9,9,9,9,9,9,9,9,9,9"
        assert main(["score", str(CONFIGS / "scorecards.ini"), "--override", bad]) == 2
        err = capsys.readouterr().err
        assert "outside [0, 10]" in err and "Endesa" in err


class TestGenData:
    def test_means_and_shape(self, tmp_path, capsys):
        out = tmp_path / "p.csv"
        assert main(["gen-data", UTILITIES, "-o", str(out)]) == 0
        series = read_price_csv(out)
        assert [len(s.prices) for s in series] == [252, 252, 252]
        stats = stats_from_series(series)
        np.testing.assert_allclose(stats.mean_returns, [-0.00051, -0.00022, 0.00036],
                                   rtol=0, atol=1e-15)
        text = capsys.readouterr().out
        assert "realized sample covariance" in text
        assert len(re.findall(r"e-0\d", text)) >= 9

    def test_reported_order_of_means(self, tmp_path):
        out = tmp_path / "p.csv"
        means = ["asset.Endesa.mean_return=-0.00051", "asset.Iberdrola.mean_return=0.00036",
                 "asset.Repsol.mean_return=-0.00022"]
        args = ["gen-data", UTILITIES, "-o", str(out)]
        for m in means:
            args += ["--override", m]
        assert main(args) == 0
        stats = stats_from_series(read_price_csv(out))
        np.testing.assert_allclose(stats.mean_returns, [-0.00051, 0.00036, -0.00022],
                                   rtol=0, atol=1e-15)

    def test_seeded_bytes(self, tmp_path):
        a, b, c = (tmp_path / n for n in ("a.csv", "b.csv", "c.csv"))
        main(["gen-data", UTILITIES, "-o", str(a), "--seed", "5"])
        main(["gen-data", UTILITIES, "-o", str(b), "--seed", "5"])
        main(["gen-data", UTILITIES, "-o", str(c), "--seed", "6"])
        assert a.read_bytes() == b.read_bytes() != c.read_bytes()

    def test_shipped_prices_match_generator(self, tmp_path):
        out = tmp_path / "p.csv"
        main(["gen-data", UTILITIES, "-o", str(out)])
        assert out.read_bytes() == (CONFIGS / "utilities_prices.csv").read_bytes()


def test_unknown_subcommand():
    with pytest.raises(SystemExit) as info:
        main(["plot", UTILITIES])
    assert info.value.code == 2


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "esgbo", "--help"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    for cmd in ("optimize", "compare", "score", "gen-data"):
        assert cmd in proc.stdout
