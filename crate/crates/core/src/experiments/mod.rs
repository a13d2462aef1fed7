//! Seeded Monte Carlo experiments: survival of a base hypergraph under random
//! ℓ-sets, threshold location and exponent fits.

mod config;
mod stats;
mod sweep;

pub use config::{jobs_from_env, Base, BaseSpec, ExperimentConfig, ModelKind, Scale, JOBS_ENV};
pub use stats::{crossing, isotonic_decreasing, least_squares, quantile, wilson_interval};
pub use sweep::{
    gnuplot_script, scaling_check, survival_probability, threshold_sweep, trial_seed, with_jobs, write_curve_csv,
    Crossing, ScalingFit, ScalingRow, SurvivalCurve, SurvivalPoint, CSV_HEADER, UNRELIABLE_UNDECIDED,
};
