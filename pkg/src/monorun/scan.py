"""Single-pass scanners for consecutive monotone structure in permutations.

A permutation is handled through its ascent stream (is position i+1 larger
than position i?), so every statistic here is computed in one left-to-right
pass with working memory that does not grow with the input:

* the maximal monotone runs (start, length, direction),
* the longest monotone block length,
* the number of monotone windows of a given length k,
* the number (and positions) of strict blocks: monotone windows of length k
  whose immediately preceding element fails to extend them, so the defining
  window spans k+1 positions and must start at position >= 2.

Inputs are rank sequences: each value 1..n appears exactly once.  Uniform
rank sequences are distributionally equivalent to n i.i.d. continuous draws
(ties have probability zero) while keeping all comparisons exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import InvalidPermutationError, ParameterError

# Statistic tags used across the exact oracle, the simulator and the CLI.
LONGEST_BLOCK = "longest_block"
MONOTONE_WINDOWS = "monotone_windows"
STRICT_BLOCKS = "strict_blocks"

# Below this size a plain Python pass beats numpy's per-call overhead.
_SMALL_N = 512


class Direction(str, Enum):
    INCREASING = "inc"
    DECREASING = "dec"


@dataclass(frozen=True)
class Run:
    """One maximal monotone run; start is 1-based, length >= 2."""

    start: int
    length: int
    direction: Direction


@dataclass(frozen=True)
class RunProfile:
    """All maximal monotone runs of a sample, in index order.

    Adjacent runs overlap in exactly one position (the turning point), and
    together the runs cover positions 1..n whenever n >= 2.
    """

    runs: tuple[Run, ...]
    n: int


@dataclass(frozen=True)
class BlockCountReport:
    """Counts for one (sample, k): overlapping windows, strict blocks, longest block."""

    n: int
    k: int
    monotone_windows: int
    strict_blocks: int
    longest_block: int


def validate_permutation(ranks: Sequence[int] | np.ndarray) -> np.ndarray:
    """Check that ranks is a permutation of 1..n and return it as an int64 array."""
    arr = np.asarray(ranks)
    if arr.size == 0:
        raise InvalidPermutationError("empty input")
    if arr.ndim != 1:
        raise InvalidPermutationError(f"expected a 1-d sequence, got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.integer):
        if np.issubdtype(arr.dtype, np.floating) and np.all(arr == np.floor(arr)):
            arr = arr.astype(np.int64)
        else:
            raise InvalidPermutationError("ranks must be integers")
    arr = arr.astype(np.int64, copy=False)
    n = arr.size
    lo, hi = int(arr.min()), int(arr.max())
    if lo < 1 or hi > n:
        bad = lo if lo < 1 else hi
        raise InvalidPermutationError(f"value {bad} outside 1..{n}")
    counts = np.bincount(arr, minlength=n + 1)
    dup = np.flatnonzero(counts[1:] > 1)
    if dup.size:
        raise InvalidPermutationError(f"duplicate value {int(dup[0]) + 1}")
    return arr


def ascent_stream(ranks: np.ndarray) -> np.ndarray:
    """Boolean ascent indicators: entry i is True iff ranks[i] < ranks[i+1]."""
    return ranks[:-1] < ranks[1:]


def runs_from_ascents(asc: Sequence[bool]) -> list[tuple[int, int, bool]]:
    """Maximal constant blocks of an ascent stream as (start0, run_length, ascending).

    start0 is the 0-based position of the run's first element; run_length
    counts elements, so a block of j equal indicators yields length j+1.
    An empty stream (n = 1) has no runs.
    """
    m = len(asc)
    if m == 0:
        return []
    runs = []
    s = 0
    prev = asc[0]
    for i in range(1, m):
        a = asc[i]
        if a != prev:
            runs.append((s, i - s + 1, prev))
            s = i
            prev = a
    runs.append((s, m - s + 1, prev))
    return runs


def _runs_numpy(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized run decomposition: (starts0, lengths, ascending) arrays."""
    asc = x[:-1] < x[1:]
    change = np.flatnonzero(asc[1:] != asc[:-1])
    bounds = np.empty(change.size + 2, dtype=np.int64)
    bounds[0] = -1
    bounds[1:-1] = change
    bounds[-1] = asc.size - 1
    lengths = np.diff(bounds) + 1
    starts = bounds[:-1] + 1
    return starts, lengths, asc[starts]


def _runs_python(xs: list) -> list[tuple[int, int, bool]]:
    n = len(xs)
    runs = []
    s = 0
    prev = xs[1] > xs[0]
    x_prev = xs[1]
    for i in range(2, n):
        xi = xs[i]
        a = xi > x_prev
        if a != prev:
            runs.append((s, i - s, prev))
            s = i - 1
            prev = a
        x_prev = xi
    runs.append((s, n - s, prev))
    return runs


def scan_counts(
    x: np.ndarray, ks: Sequence[int] = ()
) -> tuple[int, list[tuple[int, int]]]:
    """One-pass counts for a trusted sample: (longest, [(windows, strict) per k]).

    Skips permutation validation; the Monte Carlo engine calls this once per
    trial.  Each k must satisfy 2 <= k <= n-1.
    """
    n = x.size
    if n == 1:
        return 1, [(0, 0) for _ in ks]
    if n < _SMALL_N:
        runs = _runs_python(x.tolist())
        longest = max(r[1] for r in runs)
        out = []
        for k in ks:
            windows = 0
            strict = 0
            for s, length, _ in runs:
                if length >= k:
                    windows += length - k + 1
                    if s >= 1:
                        strict += 1
            out.append((windows, strict))
        return longest, out
    starts, lengths, _ = _runs_numpy(x)
    longest = int(lengths.max())
    out = []
    for k in ks:
        windows = int(np.maximum(lengths - (k - 1), 0).sum())
        strict = int(np.count_nonzero((lengths >= k) & (starts >= 1)))
        out.append((windows, strict))
    return longest, out


def maximal_run_profile(sample: Sequence[int] | np.ndarray) -> RunProfile:
    """Decompose a permutation into its maximal monotone runs.

    Returns runs in index order; adjacent runs share their turning point.
    A single-element sample has an empty profile.
    """
    x = validate_permutation(sample)
    if x.size == 1:
        return RunProfile(runs=(), n=1)
    starts, lengths, ascending = _runs_numpy(x)
    runs = tuple(
        Run(
            start=int(s) + 1,
            length=int(ln),
            direction=Direction.INCREASING if a else Direction.DECREASING,
        )
        for s, ln, a in zip(starts, lengths, ascending)
    )
    return RunProfile(runs=runs, n=int(x.size))


def longest_monotone_block(sample: Sequence[int] | np.ndarray) -> int:
    """Length of the longest monotone block; 1 for a single-element sample."""
    x = validate_permutation(sample)
    longest, _ = scan_counts(x)
    return longest


def count_monotone_windows(sample: Sequence[int] | np.ndarray, k: int) -> int:
    """Number of window positions j with sample[j..j+k-1] monotone (overlapping)."""
    x = validate_permutation(sample)
    _check_window(k, x.size, span_extra=0)
    if x.size == 1:
        return 0
    starts, lengths, _ = _runs_numpy(x)
    return int(np.maximum(lengths - (k - 1), 0).sum())


def count_strict_blocks(sample: Sequence[int] | np.ndarray, k: int) -> int:
    """Number of strict blocks: monotone k-windows not extendable to the left.

    The defining window spans k+1 positions (the breaking element plus the
    block), so valid positions run 1..n-k and k must be at most n-1.
    """
    x = validate_permutation(sample)
    _check_window(k, x.size, span_extra=1)
    starts, lengths, _ = _runs_numpy(x)
    return int(np.count_nonzero((lengths >= k) & (starts >= 1)))


def strict_block_positions(
    sample: Sequence[int] | np.ndarray, k: int
) -> list[tuple[int, Direction]]:
    """Strict blocks as (start, direction), start being the 1-based index of
    the breaking element (the k+1 window covers start..start+k)."""
    x = validate_permutation(sample)
    _check_window(k, x.size, span_extra=1)
    starts, lengths, ascending = _runs_numpy(x)
    keep = (lengths >= k) & (starts >= 1)
    return [
        (int(s), Direction.INCREASING if a else Direction.DECREASING)
        for s, a in zip(starts[keep], ascending[keep])
    ]


def block_count_report(sample: Sequence[int] | np.ndarray, k: int) -> BlockCountReport:
    """All counts for one (sample, k) from a single scan."""
    x = validate_permutation(sample)
    _check_window(k, x.size, span_extra=1)
    longest, pairs = scan_counts(x, (k,))
    windows, strict = pairs[0]
    return BlockCountReport(
        n=int(x.size),
        k=k,
        monotone_windows=windows,
        strict_blocks=strict,
        longest_block=longest,
    )


def _check_window(k: int, n: int, span_extra: int) -> None:
    if k < 2:
        raise ParameterError(f"window length must be at least 2, got {k}")
    if k + span_extra > n:
        if span_extra:
            raise ParameterError(
                f"no window of span {k}+1 fits in a sample of length {n}"
            )
        raise ParameterError(f"window exceeds sample: k={k} > n={n}")
