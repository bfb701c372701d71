//! Monte-Carlo engine for the typical link of the Cox bipolar network.
//!
//! Each trial samples a fresh network snapshot under the Palm distribution,
//! draws Rayleigh fading and records whether the SINR clears the threshold.
//! Per-trial randomness is derived from `(seed, trial index)` only, so the
//! success count is reproducible regardless of scheduling.

mod estimate;
mod geometry;
mod stream;
mod trial;

pub use estimate::{
    default_window, estimate_pc, estimate_pc_thresholds, trial_keys, wilson_interval, EstimateRecord, MIN_TRIALS, Z_99,
};
pub use geometry::{sample_plp, sample_realization, CoxRealization, Interferer, Line, LineInterferers, BLOCK_KM};
pub use stream::StreamKey;
pub use trial::{run_trial, TrialOutcome};
