"""Shared fixtures and independent brute-force oracles.

The naive_* functions below re-derive every statistic by checking each
window directly, with no shared code or shared decomposition with the
package; tests use them as ground truth against the one-pass scanners.
"""

import numpy as np
import pytest

# 20-element worked example whose run decomposition is known by hand:
# an increasing prefix of length 6, then alternating shorter runs.
WORKED_PERMUTATION = (4, 7, 9, 11, 17, 20, 18, 16, 10, 12, 13, 15, 2, 3, 5, 6, 1, 19, 14, 8)


def is_monotone(seq) -> bool:
    inc = all(seq[i] < seq[i + 1] for i in range(len(seq) - 1))
    dec = all(seq[i] > seq[i + 1] for i in range(len(seq) - 1))
    return inc or dec


def naive_longest(perm) -> int:
    n = len(perm)
    best = 1
    for i in range(n):
        for j in range(i + 2, n + 1):
            if is_monotone(perm[i:j]):
                best = max(best, j - i)
    return best


def naive_windows(perm, k) -> int:
    n = len(perm)
    return sum(1 for j in range(n - k + 1) if is_monotone(perm[j : j + k]))


def naive_strict(perm, k) -> int:
    n = len(perm)
    count = 0
    for j in range(n - k):
        window = perm[j + 1 : j + k + 1]
        if is_monotone(window) and not is_monotone(perm[j : j + k + 1]):
            count += 1
    return count


def naive_strict_positions(perm, k):
    n = len(perm)
    out = []
    for j in range(n - k):
        window = perm[j + 1 : j + k + 1]
        if is_monotone(window) and not is_monotone(perm[j : j + k + 1]):
            out.append(j + 1)  # 1-based position of the breaking element
    return out


def permutation_with_ascents(asc) -> list[int]:
    """A concrete permutation of 1..n realizing a given ascent pattern."""
    walk = [0]
    for a in asc:
        walk.append(walk[-1] + (1 if a else -1))
    order = np.argsort(np.argsort(np.array(walk), kind="stable"), kind="stable")
    return [int(v) + 1 for v in order]


@pytest.fixture
def worked_permutation():
    return WORKED_PERMUTATION
