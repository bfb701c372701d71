//! Network parameterization shared by the analytic and simulation engines.
//!
//! Lengths are in km and densities in km⁻¹ (per line) or km⁻² (per area).
//! Power units are arbitrary but linear; only `p_t / sigma2` and `beta`
//! enter the results.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::ParamError;

/// Unvalidated parameter tuple. Every field is public so callers can build
/// one from any source; [`RawParams::validate`] turns it into [`NetworkParams`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawParams {
    pub mu_l: f64,
    pub lambda_v: f64,
    pub p: f64,
    pub d: f64,
    pub alpha: f64,
    pub p_t: f64,
    pub sigma2: f64,
    pub beta: f64,
}

impl Default for RawParams {
    /// The single-link setup used for the line-density study: λ_v = 20 km⁻¹,
    /// p = 1, d = 10 m, α = 4, noise-free, 0 dB threshold, μ_l = 10 km⁻¹.
    fn default() -> Self {
        Self {
            mu_l: 10.0,
            lambda_v: 20.0,
            p: 1.0,
            d: 0.01,
            alpha: 4.0,
            p_t: 1.0,
            sigma2: 0.0,
            beta: 1.0,
        }
    }
}

impl RawParams {
    pub fn validate(self) -> Result<NetworkParams, ParamError> {
        NetworkParams::new(self)
    }
}

/// Validated, immutable model parameters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NetworkParams {
    raw: RawParams,
}

fn check(name: &'static str, value: f64, ok: bool, constraint: &'static str) -> Result<(), ParamError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(ParamError::InvalidParameter {
            name,
            value,
            constraint,
        })
    }
}

impl NetworkParams {
    pub fn new(raw: RawParams) -> Result<Self, ParamError> {
        check("mu_l", raw.mu_l, raw.mu_l >= 0.0, ">= 0")?;
        check("lambda_v", raw.lambda_v, raw.lambda_v >= 0.0, ">= 0")?;
        check("p", raw.p, (0.0..=1.0).contains(&raw.p), "in [0, 1]")?;
        check("d", raw.d, raw.d > 0.0, "> 0")?;
        if raw.alpha.is_finite() && raw.alpha <= 2.0 {
            return Err(ParamError::DivergentPathLoss { alpha: raw.alpha });
        }
        check("alpha", raw.alpha, raw.alpha > 2.0, "> 2")?;
        check("p_t", raw.p_t, raw.p_t > 0.0, "> 0")?;
        check("sigma2", raw.sigma2, raw.sigma2 >= 0.0, ">= 0")?;
        check("beta", raw.beta, raw.beta >= 0.0, ">= 0")?;
        Ok(Self { raw })
    }

    pub fn mu_l(&self) -> f64 {
        self.raw.mu_l
    }
    pub fn lambda_v(&self) -> f64 {
        self.raw.lambda_v
    }
    pub fn p(&self) -> f64 {
        self.raw.p
    }
    pub fn d(&self) -> f64 {
        self.raw.d
    }
    pub fn alpha(&self) -> f64 {
        self.raw.alpha
    }
    pub fn p_t(&self) -> f64 {
        self.raw.p_t
    }
    pub fn sigma2(&self) -> f64 {
        self.raw.sigma2
    }
    pub fn beta(&self) -> f64 {
        self.raw.beta
    }

    /// Density of the line process in its (ρ, θ) representation space.
    pub fn lambda_l(&self) -> f64 {
        self.raw.mu_l / PI
    }

    /// Active transmitters per km².
    pub fn lambda_active(&self) -> f64 {
        self.raw.mu_l * self.raw.p * self.raw.lambda_v
    }

    /// Intensity of active transmitters along any single line, km⁻¹.
    pub fn lambda_line_active(&self) -> f64 {
        self.raw.p * self.raw.lambda_v
    }

    pub fn raw(&self) -> RawParams {
        self.raw
    }

    /// Copy with one field replaced; the result is revalidated.
    pub fn with(&self, edit: impl FnOnce(&mut RawParams)) -> Result<Self, ParamError> {
        let mut raw = self.raw;
        edit(&mut raw);
        Self::new(raw)
    }

    pub fn validate(self) -> Result<Self, ParamError> {
        Self::new(self.raw)
    }
}

/// Config keys, in canonical order.
pub const CONFIG_KEYS: [&str; 8] = ["mu_l", "lambda_v", "p", "d", "alpha", "p_t", "sigma2", "beta"];

impl RawParams {
    fn slot(&mut self, key: &str) -> Option<&mut f64> {
        Some(match key {
            "mu_l" => &mut self.mu_l,
            "lambda_v" => &mut self.lambda_v,
            "p" => &mut self.p,
            "d" => &mut self.d,
            "alpha" => &mut self.alpha,
            "p_t" => &mut self.p_t,
            "sigma2" => &mut self.sigma2,
            "beta" => &mut self.beta,
            _ => return None,
        })
    }

    /// Overlays `key=value` lines onto `self`. Blank lines and `#` comments
    /// are skipped; unknown or repeated keys are errors. Keys absent from the
    /// text keep their current value.
    pub fn merge_config(mut self, text: &str) -> Result<Self, ParamError> {
        let mut seen = [false; CONFIG_KEYS.len()];
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = match line.find('#') {
                Some(pos) => &line[..pos],
                None => line,
            }
            .trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(ParamError::Syntax {
                line: line_no,
                message: "expected key=value".into(),
            })?;
            let key = key.trim();
            let value = value.trim();
            let pos = CONFIG_KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| ParamError::UnknownKey {
                    line: line_no,
                    key: key.to_string(),
                })?;
            if std::mem::replace(&mut seen[pos], true) {
                return Err(ParamError::Syntax {
                    line: line_no,
                    message: format!("duplicate key `{key}`"),
                });
            }
            let parsed: f64 = value.parse().map_err(|_| ParamError::Syntax {
                line: line_no,
                message: format!("`{value}` is not a number"),
            })?;
            *self.slot(key).expect("key checked above") = parsed;
        }
        Ok(self)
    }
}

impl FromStr for NetworkParams {
    type Err = ParamError;

    /// Parses a config text on top of [`RawParams::default`] and validates it.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RawParams::default().merge_config(s)?.validate()
    }
}

impl fmt::Display for NetworkParams {
    /// Writes the config form, which [`FromStr`] reads back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut raw = self.raw;
        for key in CONFIG_KEYS {
            writeln!(f, "{key}={}", raw.slot(key).expect("canonical key"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dense() -> RawParams {
        RawParams {
            mu_l: 30.0,
            lambda_v: 60.0,
            p: 0.5,
            d: 0.01,
            alpha: 4.0,
            p_t: 1.0,
            sigma2: 0.0,
            beta: 1.0,
        }
    }

    #[test]
    fn dense_setup_is_valid() {
        let params = dense().validate().unwrap();
        assert_eq!(params.lambda_active(), 900.0);
        assert!((params.lambda_l() - 30.0 / PI).abs() < 1e-15);
        assert!((PI * params.lambda_l() * params.p() * params.lambda_v() - 900.0).abs() < 1e-9);
    }

    #[test]
    fn alpha_two_diverges() {
        let err = RawParams { alpha: 2.0, ..dense() }.validate().unwrap_err();
        assert!(matches!(err, ParamError::DivergentPathLoss { alpha } if alpha == 2.0));
        let err = RawParams { alpha: 1.5, ..dense() }.validate().unwrap_err();
        assert!(matches!(err, ParamError::DivergentPathLoss { .. }));
    }

    #[test]
    fn rejects_out_of_range() {
        let err = RawParams { p: 1.2, ..dense() }.validate().unwrap_err();
        assert!(matches!(err, ParamError::InvalidParameter { name: "p", .. }));
        for bad in [
            RawParams { mu_l: -1.0, ..dense() },
            RawParams {
                lambda_v: -0.1,
                ..dense()
            },
            RawParams { d: 0.0, ..dense() },
            RawParams { p_t: 0.0, ..dense() },
            RawParams {
                sigma2: -1e-9,
                ..dense()
            },
            RawParams { beta: -1.0, ..dense() },
            RawParams {
                beta: f64::NAN,
                ..dense()
            },
            RawParams {
                alpha: f64::INFINITY,
                ..dense()
            },
            RawParams {
                mu_l: f64::INFINITY,
                ..dense()
            },
        ] {
            assert!(
                matches!(bad.validate(), Err(ParamError::InvalidParameter { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn config_parsing() {
        let text = "# dense highway grid\nmu_l = 30\nlambda_v=60 # per km\n\np=0.5\nbeta=1\n";
        let params: NetworkParams = text.parse().unwrap();
        assert_eq!(params.mu_l(), 30.0);
        assert_eq!(params.lambda_v(), 60.0);
        assert_eq!(params.p(), 0.5);
        assert_eq!(params.d(), 0.01);

        let err = "Mu_l=3".parse::<NetworkParams>().unwrap_err();
        assert!(matches!(err, ParamError::UnknownKey { line: 1, .. }));
        let err = "mu_l=3\nmu_l=4".parse::<NetworkParams>().unwrap_err();
        assert!(matches!(err, ParamError::Syntax { line: 2, .. }));
        let err = "p".parse::<NetworkParams>().unwrap_err();
        assert!(matches!(err, ParamError::Syntax { line: 1, .. }));
        let err = "p=abc".parse::<NetworkParams>().unwrap_err();
        assert!(matches!(err, ParamError::Syntax { .. }));
        let err = "p=2".parse::<NetworkParams>().unwrap_err();
        assert!(matches!(err, ParamError::InvalidParameter { name: "p", .. }));
    }

    #[test]
    fn display_round_trips() {
        let params = dense().validate().unwrap();
        let back: NetworkParams = params.to_string().parse().unwrap();
        assert_eq!(back, params);
    }

    proptest! {
        #[test]
        fn lambda_active_is_linear(c in 0.01f64..100.0, mu in 0.0f64..100.0, lv in 0.0f64..100.0, p in 0.0f64..1.0) {
            let base = RawParams { mu_l: mu, lambda_v: lv, p, ..RawParams::default() };
            let a = base.validate().unwrap().lambda_active();
            let scaled_mu = RawParams { mu_l: c * mu, ..base }.validate().unwrap().lambda_active();
            let scaled_lv = RawParams { lambda_v: c * lv, ..base }.validate().unwrap().lambda_active();
            let tol = 1e-12 * (1.0 + c * a);
            prop_assert!((scaled_mu - c * a).abs() <= tol);
            prop_assert!((scaled_lv - c * a).abs() <= tol);
            let shrink = c / 100.0;
            let scaled_p = RawParams { p: shrink * p, ..base }.validate().unwrap().lambda_active();
            prop_assert!((scaled_p - shrink * a).abs() <= 1e-12 * (1.0 + a));
        }

        #[test]
        fn validate_is_idempotent(mu in 0.0f64..100.0, alpha in 2.0001f64..8.0, beta in 0.0f64..100.0) {
            let params = RawParams { mu_l: mu, alpha, beta, ..RawParams::default() }.validate().unwrap();
            prop_assert_eq!(params.validate().unwrap(), params);
        }
    }
}
