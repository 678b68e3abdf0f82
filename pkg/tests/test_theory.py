"""Closed-form layer: arithmetic checks against independent evaluation."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from monorun import (
    ParameterError,
    asymptotic_block_rate,
    coin_longest_run,
    coin_target,
    overlapping_window_terms,
    poisson_approximation,
    strict_block_rate,
    strict_block_rate_exact,
    strict_tv_bound,
    target_length,
    tv_to_poisson,
    void_gap_bound,
    void_probability_approx,
    window_probability,
)
from monorun.theory import E_POW_E, log_factorial, poisson_pmf


class TestTargetLength:
    def test_at_e_to_the_e(self):
        assert target_length(E_POW_E) == pytest.approx(math.e, rel=1e-12)

    def test_reference_points(self):
        assert target_length(10**4) == pytest.approx(4.1482, abs=5e-4)
        assert target_length(10**7) == pytest.approx(5.798, abs=5e-4)

    def test_below_threshold(self):
        with pytest.raises(ParameterError, match="e\\^e"):
            target_length(15)
        target_length(16)  # smallest valid integer


class TestRates:
    def test_reference_values(self):
        assert strict_block_rate(20, 4) == pytest.approx(16 * 8 / 120, rel=1e-12)
        assert strict_block_rate(10**4, 9) == pytest.approx(
            9991 * 18 / 3628800, rel=1e-12
        )

    def test_boundary_n_equals_k_plus_one(self):
        for k in (2, 5, 9):
            assert strict_block_rate(k + 1, k) == pytest.approx(
                2 * k / math.factorial(k + 1), rel=1e-12
            )

    def test_exact_rational(self):
        assert strict_block_rate_exact(20, 4) == Fraction(16 * 8, 120)
        assert strict_block_rate_exact(3, 2) == Fraction(2, 3)

    def test_log_space_matches_exact(self):
        for n in (10, 50, 1000, 10**6):
            for k in range(2, min(n - 1, 21)):
                exact = strict_block_rate_exact(n, k)
                assert strict_block_rate(n, k) == pytest.approx(
                    float(exact), rel=1e-12
                )

    def test_large_k_no_overflow(self):
        rate = strict_block_rate(10**7, 170)
        assert 0.0 <= rate < 1e-250
        assert math.isfinite(strict_block_rate(10**9, 25))

    def test_asymptotic(self):
        assert asymptotic_block_rate(10**4, 9) == pytest.approx(
            20000 / 362880, rel=1e-12
        )
        assert asymptotic_block_rate(10, 2) == pytest.approx(10.0, rel=1e-12)

    def test_rate_ratio(self):
        n, k = 10**6, 15
        ratio = strict_block_rate(n, k) / asymptotic_block_rate(n, k)
        assert 0.9 < ratio < 1.0
        assert ratio == pytest.approx((1 - k / n) * k / (k + 1), rel=1e-9)

    def test_rate_range_errors(self):
        with pytest.raises(ParameterError):
            strict_block_rate(5, 5)
        with pytest.raises(ParameterError):
            strict_block_rate(5, 1)


class TestLogFactorial:
    def test_matches_integer_factorial(self):
        for k in range(0, 21):
            assert math.exp(log_factorial(k)) == pytest.approx(
                math.factorial(k), rel=1e-12
            )


class TestTvBound:
    def test_reference_values(self):
        bound = strict_tv_bound(50, 6)
        assert bound == pytest.approx((12 + 144) / 5040, rel=1e-9)
        # pair term at (50, 6) is below 1e-30
        assert bound - (12 + 144) / 5040 < 1e-30

    def test_small_case_components(self):
        # first component (6+36)/24, pair term 2*C(4,3)/3!
        assert strict_tv_bound(7, 3) == pytest.approx(1.75 + 8 / 6, rel=1e-12)

    def test_first_form_is_tighter(self):
        for k in range(2, 30):
            first = (2 * k + 4 * k * k) / math.factorial(k + 1)
            loose = 6 / math.factorial(k - 1)
            assert first <= loose + 1e-15

    def test_pair_term_vanishes_when_binomial_empty(self):
        # 2k > n: no pair of disjoint-entry windows fits
        assert strict_tv_bound(8, 5) == pytest.approx(
            (10 + 100) / math.factorial(6), rel=1e-12
        )


class TestVoidGapBound:
    def test_values(self):
        assert void_gap_bound(4) == pytest.approx(1 / 12, rel=1e-12)
        assert void_gap_bound(2) == pytest.approx(1.0, rel=1e-12)
        assert void_gap_bound(10) == pytest.approx(2 / 3628800, rel=1e-12)


class TestVoidProbability:
    def test_reference_values(self):
        approx, err = void_probability_approx(10**4, 9)
        assert approx == pytest.approx(math.exp(-9991 * 18 / 3628800), rel=1e-12)
        assert approx == pytest.approx(0.95165, abs=5e-5)
        assert err == pytest.approx(8 / 40320, rel=1e-9)

    def test_small_case(self):
        approx, err = void_probability_approx(8, 5)
        assert approx == pytest.approx(math.exp(-1 / 24), rel=1e-12)
        assert err == pytest.approx(8 / 24, rel=1e-12)  # C(3,5) term is zero

    def test_first_error_term_dominates_when_n_over_3k(self):
        cases = [(n, k) for k in range(2, 12) for n in (3 * k, 4 * k, 10 * k, 100 * k)]
        for n, k in cases:
            first = 8 / math.factorial(k - 1)
            pair = strict_tv_bound(n, k) - min(
                (2 * k + 4 * k * k) / math.factorial(k + 1),
                6 / math.factorial(k - 1),
            )
            assert first >= pair


class TestOverlappingWindowTerms:
    def test_constant_joint_term(self):
        terms = overlapping_window_terms(100, 5)
        assert terms.joint_over_rate == pytest.approx(4 * (math.e - 1), rel=1e-12)
        assert terms.joint_over_rate == pytest.approx(6.873, abs=5e-4)

    def test_k5(self):
        terms = overlapping_window_terms(30, 5)
        assert terms.squared_over_rate == pytest.approx(2 / 120, rel=1e-12)
        assert terms.cross_over_rate == pytest.approx(20 / 120, rel=1e-12)

    def test_vanishing_components(self):
        terms = overlapping_window_terms(10**6, 40)
        assert terms.squared_over_rate < 1e-40
        assert terms.cross_over_rate < 1e-40
        assert terms.joint_over_rate > 6.8


class TestPoissonApproxBundle:
    def test_consistency(self):
        bundle = poisson_approximation(50, 6)
        assert bundle.rate == strict_block_rate(50, 6)
        assert bundle.rate_asymptotic == asymptotic_block_rate(50, 6)
        assert bundle.tv_bound == strict_tv_bound(50, 6)
        approx, err = void_probability_approx(50, 6)
        assert (bundle.void_prob, bundle.void_error_bound) == (approx, err)
        assert bundle.void_error_bound >= bundle.tv_bound


class TestWindowProbability:
    def test_zero_width_is_exactly_zero(self):
        for n in (16, 1000, 10**6):
            assert window_probability(n, 0.0).probability == 0.0

    def test_reference_case(self):
        est = window_probability(10**4, 2.0)
        # void_lower is e^(-8810), below float underflow
        assert 0.0 <= est.void_lower < est.void_upper < 1.0
        assert est.probability > 0.0
        assert not est.in_window  # x=2 exceeds target - lnln(n) here
        assert est.window_lo == pytest.approx(-est.window_hi, rel=1e-12)

    def test_round_mode(self):
        est = window_probability(10**4, 2.0, mode="round")
        t = target_length(10**4)
        expected_upper = math.exp(-2 * 10**4 / math.factorial(round(t + 2)))
        assert est.void_upper == pytest.approx(expected_upper, rel=1e-12)

    def test_edge_validation(self):
        with pytest.raises(ParameterError, match="exceed 1"):
            window_probability(20, 2.5)
        with pytest.raises(ParameterError, match="mode"):
            window_probability(10**4, 1.0, mode="nearest")
        with pytest.raises(ParameterError, match="schedule"):
            window_probability(10**4, 1.0, delta_fn="bogus")

    def test_callable_schedules(self):
        est = window_probability(10**4, 1.0, delta_fn=math.log, theta_fn=math.log)
        assert est.delta_name == "log"
        assert est.window_hi == pytest.approx(
            target_length(10**4) - math.log(10**4), rel=1e-12
        )

    @given(
        st.integers(20, 10**7),
        st.floats(0.0, 3.0, allow_nan=False),
    )
    @settings(max_examples=200)
    def test_probability_is_a_signed_probability(self, n, x):
        t = target_length(n)
        if t - x <= 1.0:
            return
        est = window_probability(n, x)
        assert 0.0 <= est.void_upper <= 1.0
        assert 0.0 <= est.void_lower <= 1.0
        assert -1.0 <= est.probability <= 1.0
        assert est.probability >= 0.0  # monotone in the window edge


class TestCoin:
    def test_target(self):
        assert coin_target(1024, 0.5) == pytest.approx(10.0, rel=1e-12)
        with pytest.raises(ParameterError):
            coin_target(100, 0.0)
        with pytest.raises(ParameterError):
            coin_target(100, 1.0)
        with pytest.raises(ParameterError):
            coin_target(1, 0.5)

    def test_longest_run(self):
        assert coin_longest_run("HHTHHHT") == 3
        assert coin_longest_run("TTTT") == 0
        assert coin_longest_run([1, 1, 0, 1]) == 2
        assert coin_longest_run([0, 0]) == 0
        with pytest.raises(ParameterError, match="empty"):
            coin_longest_run("")
        with pytest.raises(ParameterError, match="unrecognized"):
            coin_longest_run("HHX")


class TestTvToPoisson:
    def test_poisson_against_itself_is_tiny(self):
        rate = 1.3
        probs = {v: poisson_pmf(v, rate) for v in range(0, 60)}
        assert tv_to_poisson(probs, rate) < 1e-12

    def test_point_mass_at_zero_rate(self):
        assert tv_to_poisson({0: 1.0}, 0.0) == 0.0

    def test_simple_two_point(self):
        # pmf (1/2, 1/2) on {0,1} vs Poisson(1): direct half-L1 plus tail
        rate = 1.0
        q0 = math.exp(-1)
        expected = 0.5 * (abs(0.5 - q0) * 2 + (1 - 2 * q0))
        assert tv_to_poisson({0: 0.5, 1: 0.5}, rate) == pytest.approx(
            expected, rel=1e-12
        )

    def test_bounds(self):
        with pytest.raises(ParameterError):
            tv_to_poisson({0: 1.0}, -0.5)
