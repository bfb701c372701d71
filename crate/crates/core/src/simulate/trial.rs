use rand_distr::{Distribution, Exp1};

use super::geometry::CoxRealization;
use super::stream::StreamKey;
use crate::params::NetworkParams;

/// SINR draw at the typical receiver for one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub desired_power: f64,
    pub interference: f64,
    pub sinr: f64,
    pub success: bool,
}

impl TrialOutcome {
    pub fn succeeds_at(&self, beta: f64) -> bool {
        self.sinr > beta
    }
}

/// `r²^{-α/2}` with a fast path for even integer exponents.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PathLoss {
    half_alpha: f64,
    integer: Option<i32>,
}

impl PathLoss {
    pub(crate) fn new(alpha: f64) -> Self {
        let half_alpha = 0.5 * alpha;
        let integer = (half_alpha.fract() == 0.0 && half_alpha <= 16.0).then_some(half_alpha as i32);
        Self { half_alpha, integer }
    }

    pub(crate) fn gain(&self, r2: f64) -> f64 {
        match self.integer {
            Some(1) => r2.recip(),
            Some(2) => (r2 * r2).recip(),
            Some(3) => (r2 * r2 * r2).recip(),
            Some(k) => r2.powi(k).recip(),
            None => r2.powf(-self.half_alpha),
        }
    }
}

const TAG_DESIRED: u64 = u64::MAX;

/// Draws unit-mean exponential fading for the desired link and every
/// interferer and evaluates the SINR at the origin. Each gain is keyed by the
/// interferer's tag, so a transmitter present in two nested windows sees the
/// same fading in both.
pub fn run_trial(realization: &CoxRealization, params: &NetworkParams, fading: StreamKey) -> TrialOutcome {
    let loss = PathLoss::new(params.alpha());
    let p_t = params.p_t();
    let d = realization.desired_tx_offset;
    let gain = |key: StreamKey| -> f64 { Exp1.sample(&mut key.rng()) };
    let desired_power = p_t * gain(fading.child(TAG_DESIRED)) * loss.gain(d * d);

    let mut interference = 0.0;
    for w in &realization.typical_line_interferers {
        interference += gain(fading.mark(w.tag)) * loss.gain(w.offset * w.offset);
    }
    for line in &realization.other_lines {
        let rho2 = line.line.rho * line.line.rho;
        for w in &line.interferers {
            interference += gain(fading.mark(w.tag)) * loss.gain(rho2 + w.offset * w.offset);
        }
    }
    interference *= p_t;

    let denominator = interference + params.sigma2();
    let sinr = if denominator > 0.0 {
        desired_power / denominator
    } else {
        f64::INFINITY
    };
    TrialOutcome {
        desired_power,
        interference,
        sinr,
        success: sinr > params.beta(),
    }
}
