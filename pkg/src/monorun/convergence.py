"""Growth diagnostics for the longest monotone block along an exponential grid.

The almost-sure limit longest/target -> 1 is not observable at desk scale;
what this module reports is the finite-n trajectory: per grid point the mean
and median of the longest block, their ratio to the first-order target
ln n / ln ln n, the two-sided window hit rate against its closed-form
estimate, and the coin-toss baseline (longest head run vs log_{1/p} n) for
comparison.  No limit is asserted anywhere; callers get the numbers.

Grid points are ceil(e^m); the rounding choice is recorded in CLI metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import simulate, theory
from .errors import ParameterError

GRID_ROUNDING = "ceil"


@dataclass(frozen=True)
class TrajectoryPoint:
    """Longest-block summary at one grid point.

    window_hit_rate is the fraction of trials with |longest - target| <= x;
    window_probability is the closed-form estimate it is compared against
    (difference of the two void estimates), reported even when x falls
    outside the validity window (window_in_range False).
    """

    n: int
    target: float
    mean_longest: float
    median_longest: int
    ratio: float
    trials: int
    window_x: float
    window_hit_rate: float
    window_probability: float | None
    window_in_range: bool


@dataclass(frozen=True)
class CoinPoint:
    """Longest-head-run summary at one grid point (baseline comparison)."""

    n: int
    target: float
    mean_run: float
    ratio: float
    trials: int


def exp_grid(n_min: int, n_max: int) -> list[int]:
    """Grid points ceil(e^m) for integer m, kept when they land in [n_min, n_max].

    Requires 16 <= n_min <= n_max; raises if no power of e rounds into the
    range.
    """
    if n_min < 16:
        raise ParameterError(f"grid must start at 16 or above, got {n_min}")
    if n_min > n_max:
        raise ParameterError(f"empty range: n_min={n_min} > n_max={n_max}")
    grid: list[int] = []
    m = 1
    while True:
        point = math.ceil(math.exp(m))
        if point > n_max:
            break
        if point >= n_min and (not grid or point != grid[-1]):
            grid.append(point)
        m += 1
    if not grid:
        raise ParameterError(
            f"empty grid: no integer power of e rounds into [{n_min}, {n_max}]"
        )
    return grid


def default_trial_schedule(
    grid: Sequence[int],
    budget: int = 200_000_000,
    min_trials: int = 2_000,
    max_trials: int = 100_000,
) -> list[int]:
    """Fixed-compute schedule: about budget/n trials per point, clamped."""
    if budget < 1 or min_trials < 1 or max_trials < min_trials:
        raise ParameterError("invalid schedule parameters")
    return [max(min_trials, min(max_trials, budget // n)) for n in grid]


def resolve_trial_schedule(grid: Sequence[int], trials) -> list[int]:
    if trials is None:
        return default_trial_schedule(grid)
    if isinstance(trials, int):
        return [trials] * len(grid)
    schedule = [int(t) for t in trials]
    if len(schedule) != len(grid):
        raise ParameterError(
            f"schedule length {len(schedule)} does not match grid length {len(grid)}"
        )
    return schedule


def trajectory(
    grid: Sequence[int],
    trials: int | Sequence[int] | None,
    seed: int,
    x: float = 2.0,
    workers: int = 1,
    mode: str = "gamma",
) -> list[TrajectoryPoint]:
    """Simulate every grid point and summarize the longest-block statistics.

    trials may be a single count, a per-point schedule, or None for the
    default fixed-budget schedule.  Deterministic in (grid, trials, seed).
    """
    schedule = resolve_trial_schedule(grid, trials)
    points = []
    for n, point_trials in zip(grid, schedule):
        if n < 16:
            raise ParameterError(f"grid points must be at least 16, got {n}")
        config = simulate.TrialConfig(
            n=n, ks=(), trials=point_trials, seed=seed, workers=workers
        )
        longest = run_single_statistic(config)
        target = theory.target_length(n)
        try:
            estimate = theory.window_probability(n, x, mode=mode)
            window_prob, in_range = estimate.probability, estimate.in_window
        except ParameterError:
            # Window edge at or below 1: the estimate is undefined here, the
            # grid point itself is still reported.
            window_prob, in_range = None, False
        points.append(
            TrajectoryPoint(
                n=n,
                target=target,
                mean_longest=longest.mean(),
                median_longest=longest.median(),
                ratio=longest.mean() / target,
                trials=point_trials,
                window_x=x,
                window_hit_rate=longest.mass_between(target - x, target + x),
                window_probability=window_prob,
                window_in_range=in_range,
            )
        )
    return points


def run_single_statistic(config: simulate.TrialConfig) -> simulate.EmpiricalDistribution:
    """The longest-block law for a configuration with no window lengths."""
    return simulate.run_trials(config)[0]


def coin_comparison(
    grid: Sequence[int],
    trials: int | Sequence[int] | None,
    seed: int,
    p: float = 0.5,
    workers: int = 1,
) -> list[CoinPoint]:
    """Longest-head-run ratios along the same grid, the classical baseline."""
    schedule = resolve_trial_schedule(grid, trials)
    points = []
    for n, point_trials in zip(grid, schedule):
        emp = simulate.coin_trials(n, p, point_trials, seed, workers=workers)
        target = theory.coin_target(n, p)
        points.append(
            CoinPoint(
                n=n,
                target=target,
                mean_run=emp.mean(),
                ratio=emp.mean() / target,
                trials=point_trials,
            )
        )
    return points


def predicted_median_longest(n: int, k_max: int = 400) -> int:
    """Median prediction from the void estimate: the k where exp(-rate(n, k+1))
    crosses one half (the closest approach wins)."""
    if n < 5:
        raise ParameterError(f"need n >= 5, got {n}")
    best_k = 2
    best_gap = float("inf")
    for k in range(2, min(n - 2, k_max) + 1):
        gap = abs(math.exp(-theory.strict_block_rate(n, k + 1)) - 0.5)
        if gap < best_gap:
            best_k = k
            best_gap = gap
    return best_k
