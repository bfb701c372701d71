use std::fmt;
use std::str::FromStr;

use coxnet_core::{NetworkParams, ParamError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    BetaDb,
    MuL,
    LambdaV,
    P,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::BetaDb => "beta_db",
            Axis::MuL => "mu_l",
            Axis::LambdaV => "lambda_v",
            Axis::P => "p",
        }
    }

    /// `params` with this axis set to `value` (dB for `BetaDb`).
    pub fn apply(self, params: &NetworkParams, value: f64) -> Result<NetworkParams, ParamError> {
        params.with(|raw| match self {
            Axis::BetaDb => raw.beta = db_to_linear(value),
            Axis::MuL => raw.mu_l = value,
            Axis::LambdaV => raw.lambda_v = value,
            Axis::P => raw.p = value,
        })
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// `axis:start:stop:steps`, evenly spaced and inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepParseError(String);

impl fmt::Display for SweepParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SweepParseError {}

impl FromStr for SweepSpec {
    type Err = SweepParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |m: &str| SweepParseError(format!("sweep `{s}`: {m}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [axis, start, stop, steps] = parts[..] else {
            return Err(err("expected axis:start:stop:steps"));
        };
        let axis = match axis {
            "beta_db" => Axis::BetaDb,
            "mu_l" => Axis::MuL,
            "lambda_v" => Axis::LambdaV,
            "p" => Axis::P,
            _ => return Err(err("axis must be one of beta_db, mu_l, lambda_v, p")),
        };
        let start: f64 = start.parse().map_err(|_| err("start is not a number"))?;
        let stop: f64 = stop.parse().map_err(|_| err("stop is not a number"))?;
        let steps: usize = steps.parse().map_err(|_| err("steps is not a count"))?;
        if !(start.is_finite() && stop.is_finite() && start < stop) {
            return Err(err("need finite start < stop"));
        }
        if steps < 2 {
            return Err(err("need at least 2 steps"));
        }
        Ok(Self {
            axis,
            start,
            stop,
            steps,
        })
    }
}
