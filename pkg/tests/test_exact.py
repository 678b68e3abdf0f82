"""Enumeration oracle: exact laws, identities, caps."""

import itertools
import math
from fractions import Fraction

import pytest

from monorun import (
    EnumerationCapError,
    ParameterError,
    enumerate_distribution,
    exact_tv_to_poisson,
    exact_void_probability,
    strict_block_rate_exact,
    strict_tv_bound,
    void_gap_bound,
    void_probability_approx,
)
from monorun.exact import _ascent_mask_histogram, ascent_mask_shard

from conftest import naive_longest, naive_strict, naive_windows


class TestDistributions:
    def test_n3_k3_windows(self):
        pmf = enumerate_distribution(3, 3, "monotone_windows")
        assert pmf.weights == {0: 4, 1: 2}
        assert pmf.total == 6

    def test_n4_k3_windows(self):
        # ten alternating permutations have no monotone triple (2 * zigzag(4))
        pmf = enumerate_distribution(4, 3, "monotone_windows")
        assert pmf.void_weight() == 10
        assert pmf.total == 24

    def test_n2_longest(self):
        pmf = enumerate_distribution(2, None, "longest_block")
        assert pmf.weights == {2: 2}

    def test_n1_longest(self):
        pmf = enumerate_distribution(1, None, "longest_block")
        assert pmf.weights == {1: 1}

    def test_longest_support_bounds(self):
        pmf = enumerate_distribution(6, None, "longest_block")
        assert set(pmf.support()) <= set(range(2, 7))
        assert sum(pmf.weights.values()) == math.factorial(6)

    def test_matches_direct_enumeration(self):
        for n in (2, 3, 4, 5):
            direct_long = {}
            for perm in itertools.permutations(range(1, n + 1)):
                v = naive_longest(perm)
                direct_long[v] = direct_long.get(v, 0) + 1
            assert enumerate_distribution(n, None, "longest_block").weights == direct_long
            for k in range(2, n + 1):
                direct = {}
                for perm in itertools.permutations(range(1, n + 1)):
                    v = naive_windows(perm, k)
                    direct[v] = direct.get(v, 0) + 1
                assert (
                    enumerate_distribution(n, k, "monotone_windows").weights == direct
                )
            for k in range(2, n):
                direct = {}
                for perm in itertools.permutations(range(1, n + 1)):
                    v = naive_strict(perm, k)
                    direct[v] = direct.get(v, 0) + 1
                assert enumerate_distribution(n, k, "strict_blocks").weights == direct

    def test_probability_helpers(self):
        pmf = enumerate_distribution(4, 3, "monotone_windows")
        assert pmf.probability(0) == Fraction(10, 24)
        assert pmf.probability_at_most(1) == Fraction(22, 24)
        assert pmf.probability(99) == 0


class TestVoidProbability:
    def test_examples(self):
        assert exact_void_probability(3, 3) == Fraction(2, 3)
        assert exact_void_probability(4, 3) == Fraction(5, 12)

    def test_gap_bound_small_case(self):
        gap = abs(
            exact_void_probability(6, 3, "monotone_windows")
            - exact_void_probability(6, 3, "strict_blocks")
        )
        assert gap <= Fraction(2, 6)

    def test_longest_rejected(self):
        with pytest.raises(ParameterError):
            exact_void_probability(4, 3, "longest_block")


class TestIdentities:
    def test_strict_mean_equals_rate(self):
        for n in range(3, 8):
            for k in range(2, n):
                pmf = enumerate_distribution(n, k, "strict_blocks")
                assert pmf.mean() == strict_block_rate_exact(n, k)

    def test_duality_weights(self):
        for n in range(2, 8):
            longest = enumerate_distribution(n, None, "longest_block")
            for r in range(2, n + 1):
                windows = enumerate_distribution(n, r, "monotone_windows")
                below = sum(c for v, c in longest.weights.items() if v <= r - 1)
                assert below == windows.void_weight()

    def test_void_error_contract_small(self):
        for n in range(5, 8):
            for k in range(3, n):
                approx, err = void_probability_approx(n, k)
                exact = float(exact_void_probability(n, k))
                assert abs(exact - approx) <= err

    def test_gap_contract_small(self):
        for n in range(4, 8):
            for k in range(3, n):
                gap = abs(
                    exact_void_probability(n, k, "monotone_windows")
                    - exact_void_probability(n, k, "strict_blocks")
                )
                assert float(gap) <= void_gap_bound(k) + 1e-15


class TestTvToPoisson:
    def test_bounded_by_closed_form(self):
        value = exact_tv_to_poisson(8, 6)
        assert 0.0 <= value <= strict_tv_bound(8, 6)

    def test_degenerate_window(self):
        pmf = enumerate_distribution(6, 5, "strict_blocks")
        assert set(pmf.support()) <= {0, 1, 2}
        value = exact_tv_to_poisson(6, 5)
        assert 0.0 <= value <= 1.0

    def test_invalid_range_rejected(self):
        with pytest.raises(ParameterError):
            exact_tv_to_poisson(6, 6)


class TestSharding:
    def test_shards_merge_to_full(self):
        for n in (3, 4, 5):
            merged = {}
            for first in range(n):
                for mask, c in ascent_mask_shard(n, first).items():
                    merged[mask] = merged.get(mask, 0) + c
            assert merged == _ascent_mask_histogram(n)
            assert sum(merged.values()) == math.factorial(n)


class TestCap:
    def test_default_cap(self):
        with pytest.raises(EnumerationCapError, match="cap exceeded"):
            enumerate_distribution(11, None, "longest_block")

    def test_env_lowers_cap(self, monkeypatch):
        monkeypatch.setenv("MONORUN_ENUM_CAP", "4")
        with pytest.warns(RuntimeWarning, match="overrides"):
            with pytest.raises(EnumerationCapError):
                enumerate_distribution(5, None, "longest_block")

    def test_env_warning_when_set(self, monkeypatch):
        monkeypatch.setenv("MONORUN_ENUM_CAP", "12")
        with pytest.warns(RuntimeWarning, match="overrides"):
            enumerate_distribution(4, None, "longest_block")

    def test_env_must_be_integer(self, monkeypatch):
        monkeypatch.setenv("MONORUN_ENUM_CAP", "lots")
        with pytest.raises(ParameterError):
            enumerate_distribution(4, None, "longest_block")


class TestValidation:
    def test_unknown_statistic(self):
        with pytest.raises(ParameterError, match="unknown statistic"):
            enumerate_distribution(4, 3, "windows")

    def test_k_required_for_counts(self):
        with pytest.raises(ParameterError, match="requires k"):
            enumerate_distribution(4, None, "monotone_windows")

    def test_k_ranges(self):
        with pytest.raises(ParameterError):
            enumerate_distribution(4, 5, "monotone_windows")
        with pytest.raises(ParameterError):
            enumerate_distribution(4, 4, "strict_blocks")
        with pytest.raises(ParameterError):
            enumerate_distribution(4, 1, "monotone_windows")
        with pytest.raises(ParameterError):
            enumerate_distribution(0, None, "longest_block")
