//! Failure counting, low-rate estimates, Monte Carlo sampling and threshold
//! fits.

mod counts;
mod enumerate;
mod fit;
mod lowrate;
mod patterns;
mod sample;

pub use counts::{
    boundary_ratio, n_boundary, n_boundary_term, n_fail_correlated, n_fail_restricted,
    n_fail_unified, ratio_to_f64, FailureCountTable,
};
pub use enumerate::{
    binomial, enumerate_failures, single_block_row, Combinations, EnumerationOptions,
    EnumerationResult, FailingConfig, ENUMERATION_LIMIT,
};
pub use fit::{fit_threshold, FitOptions, FitResult, FitTarget};
pub use lowrate::{
    binomial_pmf, lowrate_estimate, LowRateEstimate, LowRateOptions, LowRatePoint, Stratum,
    ESTIMATOR,
};
pub use patterns::{
    enumerate_boundary_patterns, BoundaryOptions, Pattern, PatternCount, SquareError,
};
pub use sample::{
    draw, point_seed, read_samples_csv, run_samples, write_samples_csv, SampleJob, SampleRecord,
};

/// Independent seed for sub-task `k` of a run seeded with `seed`.
pub(crate) fn stream_seed(seed: u64, k: u64) -> u64 {
    crate::decoders::derive_seed(seed, k)
}
