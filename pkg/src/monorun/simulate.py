"""Seeded, reproducible Monte Carlo over random permutations and coin tosses.

Reproducibility is by construction: trial t under seed s draws from a
counter-based generator (Philox) keyed by the pair (s, t), so the sample for
a trial is a pure function of (seed, trial) no matter how trials are split
across worker processes.  Workers own disjoint contiguous trial ranges and
return histograms; histograms merge by addition, so any worker count yields
identical results.

Permutations come from the generator's Fisher-Yates shuffle, which draws
bounded integers by rejection (no modulo bias).  Only histograms are kept;
a trial's sample is transient.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import theory
from .errors import ParameterError
from .scan import LONGEST_BLOCK, MONOTONE_WINDOWS, STRICT_BLOCKS, scan_counts

LONGEST_HEAD_RUN = "longest_head_run"

_SEED_LIMIT = 2**64


def _philox_state(seed: int) -> dict:
    """Mutable state template; the engine rewrites key word 0 per trial."""
    return {
        "bit_generator": "Philox",
        "state": {
            "counter": np.zeros(4, dtype=np.uint64),
            "key": np.array([0, seed], dtype=np.uint64),
        },
        "buffer": np.zeros(4, dtype=np.uint64),
        "buffer_pos": 4,
        "has_uint32": 0,
        "uinteger": 0,
    }


def _check_seed(seed: int) -> None:
    if not 0 <= seed < _SEED_LIMIT:
        raise ParameterError(f"seed must be in [0, 2^64), got {seed}")


@dataclass(frozen=True)
class TrialConfig:
    """One simulation request; every k must satisfy 2 <= k <= n-1."""

    n: int
    ks: tuple[int, ...] = ()
    trials: int = 1
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(self.ks))
        if self.n < 1:
            raise ParameterError(f"n must be positive, got {self.n}")
        if self.trials < 1:
            raise ParameterError(f"trials must be at least 1, got {self.trials}")
        if self.workers < 1:
            raise ParameterError(f"workers must be at least 1, got {self.workers}")
        _check_seed(self.seed)
        for k in self.ks:
            if not 2 <= k <= self.n - 1:
                raise ParameterError(
                    f"k={k} invalid for n={self.n}; need 2 <= k <= n-1"
                )


@dataclass(frozen=True)
class EmpiricalDistribution:
    """Histogram of one statistic over `trials` seeded trials."""

    statistic: str
    n: int
    k: int | None
    trials: int
    seed: int
    counts: dict[int, int] = field(default_factory=dict)

    def probability(self, value: int) -> float:
        return self.counts.get(value, 0) / self.trials

    def probability_at_most(self, value: int) -> float:
        return sum(c for v, c in self.counts.items() if v <= value) / self.trials

    def mass_between(self, lo: float, hi: float) -> float:
        """Fraction of trials with lo <= value <= hi (float bounds allowed)."""
        return sum(c for v, c in self.counts.items() if lo <= v <= hi) / self.trials

    def mean(self) -> float:
        return sum(v * c for v, c in self.counts.items()) / self.trials

    def median(self) -> int:
        """Lower median of the histogram."""
        need = (self.trials + 1) // 2
        acc = 0
        for v in sorted(self.counts):
            acc += self.counts[v]
            if acc >= need:
                return v
        raise RuntimeError("empty distribution")

    def merge(self, other: "EmpiricalDistribution") -> "EmpiricalDistribution":
        """Combine histograms from disjoint trial ranges (commutative, associative)."""
        if (self.statistic, self.n, self.k, self.seed) != (
            other.statistic,
            other.n,
            other.k,
            other.seed,
        ):
            raise ParameterError("cannot merge distributions of different runs")
        merged = dict(self.counts)
        for v, c in other.counts.items():
            merged[v] = merged.get(v, 0) + c
        return EmpiricalDistribution(
            statistic=self.statistic,
            n=self.n,
            k=self.k,
            trials=self.trials + other.trials,
            seed=self.seed,
            counts=merged,
        )


def generate_permutation(n: int, seed: int, trial: int) -> np.ndarray:
    """Uniform random permutation of 1..n, a pure function of (seed, trial)."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_seed(seed)
    if not 0 <= trial < _SEED_LIMIT:
        raise ParameterError(f"trial index must be in [0, 2^64), got {trial}")
    bitgen = np.random.Philox(key=0)
    state = _philox_state(seed)
    state["state"]["key"][0] = trial
    bitgen.state = state
    return np.random.Generator(bitgen).permutation(n) + 1


def permutation_stream(n: int, seed: int, start: int, stop: int):
    """Yield the permutations of trials [start, stop) under one seed.

    Equivalent to generate_permutation(n, seed, t) for each t, but reuses
    one generator, resetting its counter-based state per trial.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    _check_seed(seed)
    if not 0 <= start <= stop < _SEED_LIMIT:
        raise ParameterError(f"bad trial range [{start}, {stop})")
    bitgen = np.random.Philox(key=0)
    gen = np.random.Generator(bitgen)
    state = _philox_state(seed)
    key = state["state"]["key"]
    for t in range(start, stop):
        key[0] = t
        bitgen.state = state
        yield gen.permutation(n) + 1


def _permutation_trials(
    n: int, ks: tuple[int, ...], seed: int, start: int, stop: int
) -> tuple[dict, dict, dict]:
    """Scan trials [start, stop); returns histograms for longest/windows/strict."""
    bitgen = np.random.Philox(key=0)
    gen = np.random.Generator(bitgen)
    state = _philox_state(seed)
    key = state["state"]["key"]
    longest_counts: dict[int, int] = {}
    window_counts: dict[int, dict[int, int]] = {k: {} for k in ks}
    strict_counts: dict[int, dict[int, int]] = {k: {} for k in ks}
    for t in range(start, stop):
        key[0] = t
        bitgen.state = state
        x = gen.permutation(n)
        longest, pairs = scan_counts(x, ks)
        longest_counts[longest] = longest_counts.get(longest, 0) + 1
        for k, (windows, strict) in zip(ks, pairs):
            # Per-trial consistency: dominance and window/longest duality.
            if strict > windows or (windows == 0) != (longest < k):
                raise RuntimeError(
                    f"scan invariant violated at trial {t} (seed {seed}, n {n}, k {k})"
                )
            wc = window_counts[k]
            wc[windows] = wc.get(windows, 0) + 1
            sc = strict_counts[k]
            sc[strict] = sc.get(strict, 0) + 1
    return longest_counts, window_counts, strict_counts


def _split_ranges(trials: int, workers: int) -> list[tuple[int, int]]:
    per, extra = divmod(trials, workers)
    ranges = []
    start = 0
    for w in range(workers):
        size = per + (1 if w < extra else 0)
        if size:
            ranges.append((start, start + size))
        start += size
    return ranges


def _merge_into(target: dict, part: dict) -> None:
    for v, c in part.items():
        target[v] = target.get(v, 0) + c


def run_trials(config: TrialConfig) -> list[EmpiricalDistribution]:
    """Empirical laws for one configuration: longest block first, then
    (windows, strict) per requested k, all from one scan per trial."""
    ranges = _split_ranges(config.trials, config.workers)
    if len(ranges) == 1:
        parts = [_permutation_trials(config.n, config.ks, config.seed, *ranges[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            futures = [
                pool.submit(
                    _permutation_trials, config.n, config.ks, config.seed, lo, hi
                )
                for lo, hi in ranges
            ]
            parts = [f.result() for f in futures]
    longest: dict[int, int] = {}
    windows: dict[int, dict[int, int]] = {k: {} for k in config.ks}
    strict: dict[int, dict[int, int]] = {k: {} for k in config.ks}
    for lc, wc, sc in parts:
        _merge_into(longest, lc)
        for k in config.ks:
            _merge_into(windows[k], wc[k])
            _merge_into(strict[k], sc[k])

    def dist(statistic, k, counts):
        return EmpiricalDistribution(
            statistic=statistic,
            n=config.n,
            k=k,
            trials=config.trials,
            seed=config.seed,
            counts=counts,
        )

    out = [dist(LONGEST_BLOCK, None, longest)]
    for k in config.ks:
        out.append(dist(MONOTONE_WINDOWS, k, windows[k]))
        out.append(dist(STRICT_BLOCKS, k, strict[k]))
    return out


def empirical_tv_to_poisson(
    emp: EmpiricalDistribution, rate: float
) -> tuple[float, float]:
    """Total variation of an empirical pmf from Poisson(rate), with a
    multinomial (delta-method) standard error for the estimate.

    The error comes from the mass of the empirical over-set A = {v: pmf > q};
    se = sqrt(P(A)(1-P(A))/trials), with the conservative 1/(2 sqrt(trials))
    fallback when the split is degenerate.
    """
    if emp.trials < 1:
        raise ParameterError("empty distribution")
    probs = {v: c / emp.trials for v, c in emp.counts.items()}
    tv = theory.tv_to_poisson(probs, rate)
    over = sum(p for v, p in probs.items() if p > theory.poisson_pmf(v, rate))
    var = over * (1.0 - over)
    if var <= 0.0:
        return tv, 0.5 / math.sqrt(emp.trials)
    return tv, math.sqrt(var / emp.trials)


def _longest_true_run(bits: np.ndarray) -> int:
    padded = np.zeros(bits.size + 2, dtype=np.int8)
    padded[1:-1] = bits
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    if starts.size == 0:
        return 0
    ends = np.flatnonzero(d == -1)
    return int((ends - starts).max())


def _coin_trial_range(
    n: int, p: float, seed: int, start: int, stop: int
) -> dict[int, int]:
    bitgen = np.random.Philox(key=0)
    gen = np.random.Generator(bitgen)
    state = _philox_state(seed)
    key = state["state"]["key"]
    counts: dict[int, int] = {}
    for t in range(start, stop):
        key[0] = t
        bitgen.state = state
        run = _longest_true_run(gen.random(n) < p)
        counts[run] = counts.get(run, 0) + 1
    return counts


def coin_trials(
    n: int, p: float, trials: int, seed: int, workers: int = 1
) -> EmpiricalDistribution:
    """Empirical law of the longest head run in n tosses of a p-coin."""
    if not 0.0 < p < 1.0:
        raise ParameterError(f"head probability must be in (0,1), got {p}")
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    if trials < 1:
        raise ParameterError(f"trials must be at least 1, got {trials}")
    if workers < 1:
        raise ParameterError(f"workers must be at least 1, got {workers}")
    _check_seed(seed)
    ranges = _split_ranges(trials, workers)
    if len(ranges) == 1:
        parts = [_coin_trial_range(n, p, seed, *ranges[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(ranges)) as pool:
            futures = [
                pool.submit(_coin_trial_range, n, p, seed, lo, hi)
                for lo, hi in ranges
            ]
            parts = [f.result() for f in futures]
    counts: dict[int, int] = {}
    for part in parts:
        _merge_into(counts, part)
    return EmpiricalDistribution(
        statistic=LONGEST_HEAD_RUN,
        n=n,
        k=None,
        trials=trials,
        seed=seed,
        counts=counts,
    )
