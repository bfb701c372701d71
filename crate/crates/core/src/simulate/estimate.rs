use rayon::prelude::*;

use super::geometry::sample_realization;
use super::stream::StreamKey;
use super::trial::run_trial;
use crate::error::SimError;
use crate::params::NetworkParams;

/// Two-sided 99% standard normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_900_4;

pub const MIN_TRIALS: u64 = 100;

/// Default simulation window radius: `max(2 km, 200 d)`.
pub fn default_window(params: &NetworkParams) -> f64 {
    (200.0 * params.d()).max(2.0)
}

/// Monte-Carlo estimate of the success probability with its 99% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRecord {
    pub pc_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub successes: u64,
    pub n_trials: u64,
    pub seed: u64,
    pub window_radius: f64,
    pub params: NetworkParams,
}

impl EstimateRecord {
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }

    pub fn contains(&self, value: f64) -> bool {
        self.ci_low <= value && value <= self.ci_high
    }
}

/// Wilson score interval for `successes` out of `n` at normal quantile `z`.
pub fn wilson_interval(successes: u64, n: u64, z: f64) -> (f64, f64) {
    let n_f = n as f64;
    let p = successes as f64 / n_f;
    let z2 = z * z;
    let denom = 1.0 + z2 / n_f;
    let center = (p + z2 / (2.0 * n_f)) / denom;
    let half = z * (p * (1.0 - p) / n_f + z2 / (4.0 * n_f * n_f)).sqrt() / denom;
    // Clamp so the interval brackets p at p ∈ {0, 1} despite rounding.
    (
        (center - half).clamp(0.0, 1.0).min(p),
        (center + half).clamp(0.0, 1.0).max(p),
    )
}

const TAG_GEOMETRY: u64 = 1;
const TAG_FADING: u64 = 2;

/// Streams for one trial: the geometry and fading keys derive from
/// `(seed, trial)` alone.
pub fn trial_keys(seed: u64, trial: u64) -> (StreamKey, StreamKey) {
    let root = StreamKey::new(seed).child(trial);
    (root.child(TAG_GEOMETRY), root.child(TAG_FADING))
}

/// Estimates the success probability at every threshold in `betas` from one
/// shared set of trials. The `beta` field of `params` is ignored; each record
/// echoes `params` with its own threshold.
///
/// Sampling does not depend on the threshold, so each record is identical to
/// what [`estimate_pc`] returns for that threshold alone.
pub fn estimate_pc_thresholds(
    params: &NetworkParams,
    betas: &[f64],
    window_radius: f64,
    n_trials: u64,
    seed: u64,
) -> Result<Vec<EstimateRecord>, SimError> {
    if n_trials < MIN_TRIALS {
        return Err(SimError::TooFewTrials {
            min: MIN_TRIALS,
            got: n_trials,
        });
    }
    let echoes = betas
        .iter()
        .map(|&beta| params.with(|raw| raw.beta = beta))
        .collect::<Result<Vec<_>, _>>()
        .map_err(SimError::Param)?;
    // Surface window errors before fanning out.
    sample_realization(params, window_radius, StreamKey::new(seed))?;

    let successes = (0..n_trials)
        .into_par_iter()
        .fold(
            || vec![0u64; betas.len()],
            |mut acc, trial| {
                let (geometry, fading) = trial_keys(seed, trial);
                let realization = sample_realization(params, window_radius, geometry).expect("window checked");
                let outcome = run_trial(&realization, params, fading);
                for (count, &beta) in acc.iter_mut().zip(betas) {
                    *count += u64::from(outcome.succeeds_at(beta));
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; betas.len()],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    Ok(successes
        .into_iter()
        .zip(echoes)
        .map(|(s, echo)| {
            let (ci_low, ci_high) = wilson_interval(s, n_trials, Z_99);
            EstimateRecord {
                pc_hat: s as f64 / n_trials as f64,
                ci_low,
                ci_high,
                successes: s,
                n_trials,
                seed,
                window_radius,
                params: echo,
            }
        })
        .collect())
}

/// Monte-Carlo estimate of the typical link's success probability from
/// `n_trials` independent (realization, fading) pairs. Bit-reproducible for a
/// given seed regardless of thread count.
pub fn estimate_pc(
    params: &NetworkParams,
    window_radius: f64,
    n_trials: u64,
    seed: u64,
) -> Result<EstimateRecord, SimError> {
    let mut records = estimate_pc_thresholds(params, &[params.beta()], window_radius, n_trials, seed)?;
    Ok(records.pop().expect("one threshold"))
}
