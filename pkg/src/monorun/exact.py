"""Exhaustive enumeration oracle over all n! permutations (small n).

Produces exact integer-weighted laws of the longest monotone block, the
overlapping window count and the strict block count, plus exact void
probabilities and the exact total variation distance of the strict-block
law from its Poisson approximation.

Every permutation is generated and scanned; the only shortcut is that all
three statistics depend on a permutation only through its ascent stream, so
the n! scans aggregate into a histogram over at most 2^(n-1) ascent masks
before the per-(k, statistic) law is read off.  Counts are exact integers,
probabilities exact rationals; only the comparison against the Poisson pmf
mixes in floats (evaluation error below 1e-12).

The default size cap is ENUMERATION_CAP = 10 (about a minute of scanning on
one core); the MONORUN_ENUM_CAP environment variable overrides it, with a
warning.
"""

from __future__ import annotations

import itertools
import math
import os
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import theory
from .errors import EnumerationCapError, ParameterError
from .scan import LONGEST_BLOCK, MONOTONE_WINDOWS, STRICT_BLOCKS, runs_from_ascents

ENUMERATION_CAP = 10
CAP_ENV_VAR = "MONORUN_ENUM_CAP"

_STATISTICS = (LONGEST_BLOCK, MONOTONE_WINDOWS, STRICT_BLOCKS)


@dataclass(frozen=True)
class ExactPMF:
    """Exact law of one statistic over all n! permutations.

    weights maps a statistic value to the number of permutations attaining
    it; the weights sum to n!.  k is None for the longest-block statistic.
    """

    n: int
    k: int | None
    statistic: str
    weights: dict[int, int]
    total: int

    def probability(self, value: int) -> Fraction:
        return Fraction(self.weights.get(value, 0), self.total)

    def probability_at_most(self, value: int) -> Fraction:
        acc = sum(c for v, c in self.weights.items() if v <= value)
        return Fraction(acc, self.total)

    def void_weight(self) -> int:
        return self.weights.get(0, 0)

    def mean(self) -> Fraction:
        return Fraction(
            sum(v * c for v, c in self.weights.items()), self.total
        )

    def support(self) -> list[int]:
        return sorted(self.weights)


def _effective_cap() -> int:
    raw = os.environ.get(CAP_ENV_VAR)
    if raw is None:
        return ENUMERATION_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ParameterError(f"{CAP_ENV_VAR} must be an integer, got {raw!r}") from None
    if cap != ENUMERATION_CAP:
        warnings.warn(
            f"{CAP_ENV_VAR}={cap} overrides the default enumeration cap "
            f"{ENUMERATION_CAP}; n! scans grow fast",
            RuntimeWarning,
            stacklevel=3,
        )
    return cap


def _check_n(n: int) -> None:
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    cap = _effective_cap()
    if n > cap:
        raise EnumerationCapError(f"enumeration cap exceeded: n={n} > {cap}")


def ascent_mask_shard(n: int, first: int) -> dict[int, int]:
    """Histogram of ascent masks over permutations starting with `first` (0-based value).

    Bit j of a mask is set iff position j+1 exceeds position j.  Shards for
    the n possible first elements are disjoint and merge by addition.
    """
    hist: dict[int, int] = {}
    if n == 1:
        return {0: 1}
    rest = [v for v in range(n) if v != first]
    for tail in itertools.permutations(rest):
        prev = first
        mask = 0
        for j, v in enumerate(tail):
            if prev < v:
                mask |= 1 << j
            prev = v
        hist[mask] = hist.get(mask, 0) + 1
    return hist


@lru_cache(maxsize=None)
def _ascent_mask_histogram(n: int) -> dict[int, int]:
    full: dict[int, int] = {}
    for first in range(n):
        for mask, c in ascent_mask_shard(n, first).items():
            full[mask] = full.get(mask, 0) + c
    return full


def _mask_statistic(mask: int, n: int, k: int | None, statistic: str) -> int:
    if n == 1:
        return 1 if statistic == LONGEST_BLOCK else 0
    asc = [bool((mask >> j) & 1) for j in range(n - 1)]
    runs = runs_from_ascents(asc)
    if statistic == LONGEST_BLOCK:
        return max(r[1] for r in runs)
    if statistic == MONOTONE_WINDOWS:
        return sum(length - k + 1 for _, length, _ in runs if length >= k)
    return sum(1 for s, length, _ in runs if length >= k and s >= 1)


def enumerate_distribution(n: int, k: int | None, statistic: str) -> ExactPMF:
    """Exact pmf of a statistic by exhaustive generation of all n! permutations.

    statistic is one of "longest_block" (k ignored), "monotone_windows"
    (needs 2 <= k <= n) or "strict_blocks" (needs 2 <= k <= n-1).
    """
    if statistic not in _STATISTICS:
        raise ParameterError(
            f"unknown statistic {statistic!r}; known: {sorted(_STATISTICS)}"
        )
    _check_n(n)
    if statistic == LONGEST_BLOCK:
        k = None
    else:
        if k is None:
            raise ParameterError(f"statistic {statistic!r} requires k")
        if k < 2:
            raise ParameterError(f"window length must be at least 2, got {k}")
        if statistic == MONOTONE_WINDOWS and k > n:
            raise ParameterError(f"window exceeds sample: k={k} > n={n}")
        if statistic == STRICT_BLOCKS and k > n - 1:
            raise ParameterError(
                f"no window of span {k}+1 fits in a sample of length {n}"
            )
    weights: dict[int, int] = {}
    for mask, count in _ascent_mask_histogram(n).items():
        v = _mask_statistic(mask, n, k, statistic)
        weights[v] = weights.get(v, 0) + count
    return ExactPMF(
        n=n, k=k, statistic=statistic, weights=weights, total=math.factorial(n)
    )


def exact_void_probability(
    n: int, k: int, statistic: str = MONOTONE_WINDOWS
) -> Fraction:
    """Exact P(count = 0) for the window or strict-block statistic."""
    if statistic == LONGEST_BLOCK:
        raise ParameterError("void probability applies to the counting statistics")
    pmf = enumerate_distribution(n, k, statistic)
    return Fraction(pmf.void_weight(), pmf.total)


def exact_tv_to_poisson(n: int, k: int) -> float:
    """Exact total variation of the strict-block law from Poisson(rate).

    The exact pmf is rational; the Poisson side is evaluated in floats, so
    the result carries only float rounding (< 1e-12).
    """
    pmf = enumerate_distribution(n, k, STRICT_BLOCKS)
    rate = theory.strict_block_rate(n, k)
    probs = {v: c / pmf.total for v, c in pmf.weights.items()}
    return theory.tv_to_poisson(probs, rate)
