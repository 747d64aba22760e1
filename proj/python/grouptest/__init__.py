"""Exact thresholds, rates, and desk-scale simulation for noisy pooled
testing with Bernoulli and near-constant-weight designs.

Everything lives in the compiled extension; this package re-exports it.
Designs are referred to by the strings ``"bern"`` and ``"nc"``.
"""

from ._core import (  # noqa: F401
    BudgetError,
    DecodeResult,
    DesignStats,
    FailureCheck,
    FeasiblePair,
    GainCounts,
    GammaSchedule,
    InfoDensity,
    KCountEntry,
    MaskingStats,
    MinimaxResult,
    MutualInfo,
    NuOpt,
    TailBounds,
    TestMatrix,
    ThresholdCoeff,
    Witness,
    __version__,
    apply_noise,
    asymptotic_mutual_info,
    big_binomial,
    binary_entropy,
    binomial_pmf,
    binomial_tail,
    binomial_tail_bounds,
    check_failure_conditions,
    count_correct,
    d_star,
    default_swap_radius,
    derive_feasible_pair,
    design_stats,
    dump_matrix,
    enumerate_k_czeta,
    f1,
    f2,
    f2_clamped,
    g,
    g_counts,
    gamma_schedule,
    gen_matrix,
    hybrid_decoder,
    hypergeom_pmf,
    info_density,
    kl_bernoulli,
    log_binomial,
    masking_stats,
    minimax_czeta,
    mle_exact,
    mle_restricted,
    nc_delta,
    ncomp_baseline,
    noiseless_outcomes,
    occupancy_pmf,
    occupancy_upper_bound,
    optimize_nu,
    rate,
    simulate_outcomes,
    star,
    stirling2,
    substream_seed,
    threshold_coeff,
    threshold_decoder,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
