"""Consecutive monotone block statistics of random permutations.

Scanners for maximal monotone runs, window and strict-block counts; the
Poisson picture for strict blocks with its error bounds; an exhaustive
enumeration oracle for small n; a seeded, worker-count-independent Monte
Carlo engine; and growth diagnostics along an exponential grid.
"""

from .convergence import (
    CoinPoint,
    TrajectoryPoint,
    coin_comparison,
    default_trial_schedule,
    exp_grid,
    predicted_median_longest,
    trajectory,
)
from .errors import (
    EnumerationCapError,
    InvalidPermutationError,
    MonorunError,
    ParameterError,
)
from .exact import (
    ENUMERATION_CAP,
    ExactPMF,
    enumerate_distribution,
    exact_tv_to_poisson,
    exact_void_probability,
)
from .scan import (
    LONGEST_BLOCK,
    MONOTONE_WINDOWS,
    STRICT_BLOCKS,
    BlockCountReport,
    Direction,
    Run,
    RunProfile,
    block_count_report,
    count_monotone_windows,
    count_strict_blocks,
    longest_monotone_block,
    maximal_run_profile,
    strict_block_positions,
    validate_permutation,
)
from .simulate import (
    EmpiricalDistribution,
    TrialConfig,
    coin_trials,
    empirical_tv_to_poisson,
    generate_permutation,
    permutation_stream,
    run_trials,
)
from .theory import (
    OverlapTerms,
    PoissonApprox,
    WindowEstimate,
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

__version__ = "0.1.0"
