"""Closed-form quantities for monotone block counts of random permutations.

Everything here is a plain function of (n, k) or (n, x):

* expected strict-block count (the Poisson rate) and its 2n/k! estimate,
* total variation bound for the strict-block law against that Poisson,
* void probability estimate exp(-rate) with its error bound,
* the gap bound between the window void and the strict-block void,
* the bound terms showing why the raw overlapping-window count has no
  vanishing Poisson error (the joint-occurrence term stays near 4(e-1)),
* the first-order target length ln n / ln ln n and the two-sided window
  probability built from it,
* coin-toss baselines (target log_{1/p} n, longest run of heads).

Factorials and binomials are evaluated through log-gamma so that large k and
n never overflow; exact integer/rational arithmetic lives in the enumeration
oracle, not here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import ParameterError

# Below e^e the target ln n / ln ln n is undefined or degenerate.
E_POW_E = math.exp(math.e)

# Divergence schedules accepted by name in window_probability.
SCHEDULES: dict[str, Callable[[float], float]] = {
    "lnln": lambda n: math.log(math.log(n)),
    "lnlnln": lambda n: math.log(math.log(math.log(n))),
}


@dataclass(frozen=True)
class PoissonApprox:
    """Poisson picture for strict blocks at one (n, k).

    rate is the exact expected strict-block count, rate_asymptotic its
    2n/k! simplification.  tv_bound caps the total variation distance of
    the strict-block law from Poisson(rate); void_prob = exp(-rate)
    estimates the probability of seeing no monotone k-window at all, with
    absolute error at most void_error_bound.
    """

    n: int
    k: int
    rate: float
    rate_asymptotic: float
    tv_bound: float
    void_prob: float
    void_error_bound: float


@dataclass(frozen=True)
class OverlapTerms:
    """Per-rate bound terms for the raw overlapping-window count.

    The first two vanish as k grows; joint_over_rate does not (it equals
    4(e-1) ~ 6.87), which is why the overlapping count is approximated
    through strict blocks instead.
    """

    squared_over_rate: float
    cross_over_rate: float
    joint_over_rate: float


@dataclass(frozen=True)
class WindowEstimate:
    """Two-sided window estimate P(|longest - target| <= x) ~ void_upper - void_lower.

    void_upper/void_lower are exp(-2n / (target +- x)!) with the factorial
    of a non-integer read as the gamma-function extension (mode="gamma") or
    rounded to the nearest integer first (mode="round").  The estimate is
    only asserted for x inside (window_lo, window_hi); outside, in_window is
    False and the numbers are still reported.
    """

    n: int
    x: float
    void_upper: float
    void_lower: float
    probability: float
    window_lo: float
    window_hi: float
    in_window: bool
    delta_name: str
    theta_name: str
    mode: str


def log_factorial(k: float) -> float:
    """ln(k!) via log-gamma; accepts non-integers (gamma extension)."""
    return math.lgamma(k + 1.0)


def target_length(n: float) -> float:
    """First-order guess ln n / ln ln n for the longest monotone block.

    Solves (t/e)^t = 2n to first order.  Requires n >= e^e so the
    denominator is at least 1.
    """
    if n < E_POW_E:
        raise ParameterError(f"target undefined below e^e (~15.15), got n={n}")
    return math.log(n) / math.log(math.log(n))


def _check_rate_args(n: int, k: int) -> None:
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    if k > n - 1:
        raise ParameterError(f"need k <= n-1 for a span of k+1, got n={n}, k={k}")


def strict_block_rate(n: int, k: int) -> float:
    """Expected number of strict blocks: (n-k) * 2k / (k+1)!.

    There are n-k spots where the k+1 window fits, and of the (k+1)! orders
    of its entries exactly 2k leave the last k monotone with a breaking
    first element.  Evaluated in log space so k > 20 cannot overflow.
    """
    _check_rate_args(n, k)
    return math.exp(
        math.log(2.0) + math.log(n - k) + math.log(k) - log_factorial(k + 1)
    )


def strict_block_rate_exact(n: int, k: int) -> Fraction:
    """The same expectation as an exact rational, for oracle identities."""
    _check_rate_args(n, k)
    return Fraction(2 * k * (n - k), math.factorial(k + 1))


def asymptotic_block_rate(n: int, k: int) -> float:
    """Large-n simplification 2n/k! of the strict-block rate."""
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    return math.exp(math.log(2.0 * n) - log_factorial(k))


def _pair_overlap_tail(n: int, k: int) -> float:
    """2 * C(n-k, k) / (n-k-1)!, the window-pair term shared by the bounds.

    Zero when the binomial is empty (2k > n).  Log-space throughout.
    """
    if 2 * k > n:
        return 0.0
    log_binom = (
        log_factorial(n - k) - log_factorial(k) - log_factorial(n - 2 * k)
    )
    return math.exp(math.log(2.0) + log_binom - log_factorial(n - k - 1))


def strict_tv_bound(n: int, k: int) -> float:
    """Total variation bound for the strict-block law vs Poisson(rate).

    (2k + 4k^2)/(k+1)! + 2*C(n-k,k)/(n-k-1)!; the first component is the
    tighter of the two published forms (the other being 6/(k-1)!), so the
    minimum of the two is returned plus the pair term.
    """
    _check_rate_args(n, k)
    first = math.exp(math.log(2.0 * k + 4.0 * k * k) - log_factorial(k + 1))
    loose = math.exp(math.log(6.0) - log_factorial(k - 1))
    return min(first, loose) + _pair_overlap_tail(n, k)


def void_gap_bound(k: int) -> float:
    """Bound 2/k! on |P(no window) - P(no strict block)|.

    If some monotone k-window exists but no strict block does, the leftmost
    window must sit at position 1, an event of probability exactly 2/k!.
    """
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    return math.exp(math.log(2.0) - log_factorial(k))


def void_probability_approx(n: int, k: int) -> tuple[float, float]:
    """Estimate of P(no monotone k-window) and its absolute error bound.

    Returns (exp(-rate), 8/(k-1)! + 2*C(n-k,k)/(n-k-1)!); the true void
    probability lies within error_bound of the estimate.
    """
    _check_rate_args(n, k)
    approx = math.exp(-strict_block_rate(n, k))
    error = math.exp(math.log(8.0) - log_factorial(k - 1)) + _pair_overlap_tail(n, k)
    return approx, error


def overlapping_window_terms(n: int, k: int) -> OverlapTerms:
    """Bound terms (per unit rate) for the raw overlapping-window count.

    Documents that the direct approximation cannot work: the squared and
    cross terms are 2/k! and 4k/k!, but the joint-occurrence term is bounded
    only by the constant 4(e-1).
    """
    if k < 2:
        raise ParameterError(f"k must be at least 2, got {k}")
    if k > n:
        raise ParameterError(f"window exceeds sample: k={k} > n={n}")
    kfac_log = log_factorial(k)
    return OverlapTerms(
        squared_over_rate=math.exp(math.log(2.0) - kfac_log),
        cross_over_rate=math.exp(math.log(4.0 * k) - kfac_log),
        joint_over_rate=4.0 * (math.e - 1.0),
    )


def poisson_approximation(n: int, k: int) -> PoissonApprox:
    """Bundle rate, asymptotic rate, TV bound and void estimate for (n, k)."""
    approx, err = void_probability_approx(n, k)
    return PoissonApprox(
        n=n,
        k=k,
        rate=strict_block_rate(n, k),
        rate_asymptotic=asymptotic_block_rate(n, k),
        tv_bound=strict_tv_bound(n, k),
        void_prob=approx,
        void_error_bound=err,
    )


def _resolve_schedule(fn: str | Callable[[float], float]) -> tuple[str, Callable]:
    if callable(fn):
        return getattr(fn, "__name__", "custom"), fn
    try:
        return fn, SCHEDULES[fn]
    except KeyError:
        raise ParameterError(
            f"unknown divergence schedule {fn!r}; known: {sorted(SCHEDULES)}"
        ) from None


def window_probability(
    n: int,
    x: float,
    delta_fn: str | Callable[[float], float] = "lnln",
    theta_fn: str | Callable[[float], float] = "lnln",
    mode: str = "gamma",
) -> WindowEstimate:
    """Two-sided estimate for the longest block landing within x of its target.

    With t = target_length(n), computes exp(-2n/(t+x)!) - exp(-2n/(t-x)!)
    where non-integer factorials use the gamma extension (mode="gamma") or
    nearest-integer rounding (mode="round").  The validity window for x is
    (-t + delta(n), t - theta(n)); an x outside it is flagged via
    in_window=False, never fatal.
    """
    if mode not in ("gamma", "round"):
        raise ParameterError(f"mode must be 'gamma' or 'round', got {mode!r}")
    t = target_length(n)
    k_hi = t + x
    k_lo = t - x
    if k_hi <= 1.0 or k_lo <= 1.0:
        raise ParameterError(
            f"window edges must exceed 1: target {t:.4f} with x={x} gives "
            f"({k_lo:.4f}, {k_hi:.4f})"
        )
    if mode == "round":
        k_hi = float(round(k_hi))
        k_lo = float(round(k_lo))
    log2n = math.log(2.0 * n)
    void_upper = math.exp(-math.exp(log2n - log_factorial(k_hi)))
    void_lower = math.exp(-math.exp(log2n - log_factorial(k_lo)))
    delta_name, delta = _resolve_schedule(delta_fn)
    theta_name, theta = _resolve_schedule(theta_fn)
    lo = -t + delta(n)
    hi = t - theta(n)
    return WindowEstimate(
        n=n,
        x=x,
        void_upper=void_upper,
        void_lower=void_lower,
        probability=void_upper - void_lower,
        window_lo=lo,
        window_hi=hi,
        in_window=lo < x < hi,
        delta_name=delta_name,
        theta_name=theta_name,
        mode=mode,
    )


def coin_target(n: int, p: float) -> float:
    """Expected-order length log_{1/p} n of the longest head run in n tosses."""
    if not 0.0 < p < 1.0:
        raise ParameterError(f"head probability must be in (0,1), got {p}")
    if n < 2:
        raise ParameterError(f"need n >= 2 tosses, got {n}")
    return math.log(n) / math.log(1.0 / p)


def coin_longest_run(bits: Iterable[int] | str) -> int:
    """Longest run of heads in a toss sequence, one pass.

    Accepts any iterable of truthy/falsy values, or a string over
    H/T (case-insensitive) or 1/0.
    """
    if isinstance(bits, str):
        mapping = {"h": 1, "t": 0, "1": 1, "0": 0}
        try:
            seq: Iterable[int] = [mapping[c] for c in bits.lower()]
        except KeyError as exc:
            raise ParameterError(f"unrecognized toss symbol {exc.args[0]!r}") from None
    else:
        seq = bits
    best = 0
    current = 0
    seen = False
    for b in seq:
        seen = True
        if b:
            current += 1
            if current > best:
                best = current
        else:
            current = 0
    if not seen:
        raise ParameterError("empty input")
    return best


def poisson_pmf(value: int, rate: float) -> float:
    """P(Poisson(rate) = value), log-space."""
    if value < 0:
        return 0.0
    if rate == 0.0:
        return 1.0 if value == 0 else 0.0
    return math.exp(-rate + value * math.log(rate) - log_factorial(value))


def tv_to_poisson(probs: Mapping[int, float], rate: float) -> float:
    """Total variation distance between a finite pmf and Poisson(rate).

    Half the L1 difference over the pmf's support, plus half the Poisson
    mass beyond it (the half-sum form equals the sup-over-sets definition
    for discrete laws).  Float evaluation error is below 1e-12 here.
    """
    if rate < 0.0:
        raise ParameterError(f"rate must be nonnegative, got {rate}")
    max_v = max(probs) if probs else 0
    covered = 0.0
    half_l1 = 0.0
    for v in range(max_v + 1):
        q = poisson_pmf(v, rate)
        covered += q
        half_l1 += abs(probs.get(v, 0.0) - q)
    tail = max(0.0, 1.0 - covered)
    return 0.5 * (half_l1 + tail)
