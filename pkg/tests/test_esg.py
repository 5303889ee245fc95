import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esgbo.errors import MalformedInputError
from esgbo.esg import EsgScorecard, EsgTotal, portfolio_esg, scorecard_total

scores14 = st.lists(st.floats(0, 10), min_size=14, max_size=14)


def weights14(seed):
    return np.random.default_rng(seed).dirichlet(np.ones(14))


class TestScorecard:
    def test_all_tens(self):
        w = weights14(1)
        assert scorecard_total(EsgScorecard("f", [10.0] * 14, w)).total == 10.0

    def test_single_category_uniform(self):
        card = EsgScorecard("f", [10.0] + [0.0] * 13)
        assert scorecard_total(card).total == pytest.approx(0.7142857142857143, abs=1e-15)

    def test_all_zero(self):
        assert scorecard_total(EsgScorecard("f", [0.0] * 14)).total == 0.0

    @pytest.mark.parametrize("scores", [[5.0] * 13, [5.0] * 15])
    def test_wrong_count(self, scores):
        with pytest.raises(MalformedInputError):
            EsgScorecard("f", scores)

    def test_out_of_range_score(self):
        with pytest.raises(MalformedInputError, match="category 3"):
            EsgScorecard("f", [5.0, 5.0, 11.0] + [5.0] * 11)

    def test_weights_must_sum_to_one(self):
        with pytest.raises(MalformedInputError, match="sum"):
            EsgScorecard("f", [5.0] * 14, np.full(14, 0.1))

    def test_negative_weight(self):
        w = np.full(14, 1 / 14)
        w[0] -= 0.1
        w[1] += 0.1
        with pytest.raises(MalformedInputError, match=">= 0"):
            EsgScorecard("f", [5.0] * 14, w)

    @settings(max_examples=200, deadline=None)
    @given(scores14, st.integers(0, 1000), st.integers(0, 13), st.floats(0, 10))
    def test_monotone_and_bounded(self, scores, seed, k, bump):
        w = weights14(seed)
        base = scorecard_total(EsgScorecard("f", scores, w)).total
        assert min(scores) <= base <= max(scores)
        up = list(scores)
        up[k] = max(up[k], bump)
        assert scorecard_total(EsgScorecard("f", up, w)).total >= base


class TestEsgTotal:
    def test_range(self):
        with pytest.raises(MalformedInputError):
            EsgTotal("f", 10.5)


class TestPortfolioEsg:
    def test_reference_weights(self):
        assert portfolio_esg([0.576, 0.212, 0.212], [8.7, 8.97, 7.32]) == pytest.approx(
            8.46468, abs=1e-12)

    def test_degenerate(self):
        assert portfolio_esg([1, 0, 0], [8.7, 8.97, 7.32]) == 8.7

    def test_equal_weights_spread(self):
        assert portfolio_esg([1 / 3] * 3, [9, 5, 2]) == pytest.approx(16 / 3, abs=1e-12)

    def test_accepts_total_objects(self):
        totals = [EsgTotal("a", 4.0), EsgTotal("b", 6.0)]
        assert portfolio_esg([0.5, 0.5], totals) == 5.0

    def test_length_mismatch(self):
        with pytest.raises(MalformedInputError):
            portfolio_esg([0.5, 0.5], [1, 2, 3])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 8))
    def test_bounds_monotone_permutation(self, seed, n):
        rng = np.random.default_rng(seed)
        w = rng.dirichlet(np.ones(n))
        t = rng.uniform(0, 10, n)
        v = portfolio_esg(w, t)
        assert t.min() <= v <= t.max()
        perm = rng.permutation(n)
        assert portfolio_esg(w[perm], t[perm]) == pytest.approx(v, abs=1e-12)
        k = rng.integers(n)
        t2 = t.copy()
        t2[k] = rng.uniform(t[k], 10)
        assert portfolio_esg(w, t2) >= v
