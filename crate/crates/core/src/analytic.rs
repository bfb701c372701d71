//! Closed-form and quadrature evaluation of the link success probability,
//! its 1D/2D Poisson limits, the area spectral efficiency, and the ALOHA
//! transmission probability that maximizes it.
//!
//! All interference integrals are evaluated in units of the natural length
//! `c = (s·P_t)^{1/α}`, the distance at which an interferer's mean received
//! power equals `1/s`. With `x = c·u` and `y = c·v` the along-line and
//! cross-line integrals become parameter-free apart from the prefactors.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::error::AnalyticError;
use crate::params::NetworkParams;
use crate::quadrature::{integrate_semi_infinite, try_integrate_semi_infinite, QuadratureSpec};

/// Which success-probability expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PcModel {
    /// Exact Cox bipolar model (typical line plus a Poisson line process).
    Cox,
    /// Sparse-road limit: the typical line alone, a 1D Poisson network.
    Limit1D,
    /// Dense-road, sparse-traffic limit: a 2D Poisson network with the same
    /// active density `lambda_active`.
    Limit2D,
}

impl PcModel {
    pub const ALL: [PcModel; 3] = [PcModel::Cox, PcModel::Limit1D, PcModel::Limit2D];

    pub fn label(self) -> &'static str {
        match self {
            PcModel::Cox => "cox",
            PcModel::Limit1D => "1d",
            PcModel::Limit2D => "2d",
        }
    }
}

impl fmt::Display for PcModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for PcModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cox" => Ok(PcModel::Cox),
            "1d" => Ok(PcModel::Limit1D),
            "2d" => Ok(PcModel::Limit2D),
            other => Err(format!("unknown model `{other}` (expected cox, 1d or 2d)")),
        }
    }
}

/// `∫₀^∞ dx / (1 + x^α) = (π/α) csc(π/α)`.
pub fn rational_kernel_integral(alpha: f64) -> f64 {
    let arg = PI / alpha;
    arg / arg.sin()
}

fn noise_factor(params: &NetworkParams) -> f64 {
    (-params.beta() * params.sigma2() * params.d().powf(params.alpha()) / params.p_t()).exp()
}

/// Laplace argument at which the success probability is evaluated, `β d^α / P_t`.
pub fn link_laplace_argument(params: &NetworkParams) -> f64 {
    params.beta() * params.d().powf(params.alpha()) / params.p_t()
}

fn natural_length(s: f64, params: &NetworkParams) -> f64 {
    (s * params.p_t()).powf(1.0 / params.alpha())
}

/// Laplace transform of the interference from the typical line.
pub fn laplace_i0(s: f64, params: &NetworkParams) -> f64 {
    if s <= 0.0 || params.lambda_line_active() == 0.0 {
        return 1.0;
    }
    let c = natural_length(s, params);
    (-2.0 * params.lambda_line_active() * c * rational_kernel_integral(params.alpha())).exp()
}

/// `G(v) = ∫₀^∞ du / (1 + (v² + u²)^{α/2})`, the along-line interference
/// kernel for a line at normalized perpendicular distance `v`.
fn line_kernel(v: f64, alpha: f64, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    // Integrate in units of max(1, v) so the mass stays near t = 1/2.
    let scale = v.max(1.0);
    let half_alpha = 0.5 * alpha;
    let v2 = v * v;
    let r = integrate_semi_infinite(
        |w| {
            let u = scale * w;
            1.0 / (1.0 + (v2 + u * u).powf(half_alpha))
        },
        spec,
    )?;
    Ok(scale * r.value)
}

/// Laplace transform of the interference from all lines other than the
/// typical line, evaluated as a nested double integral.
pub fn laplace_i1(s: f64, params: &NetworkParams, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    if s <= 0.0 || params.mu_l() == 0.0 || params.lambda_line_active() == 0.0 {
        return Ok(1.0);
    }
    let c = natural_length(s, params);
    let kappa = 2.0 * params.lambda_line_active() * c;
    let alpha = params.alpha();
    let inner = spec.tightened(10.0);
    let outer = try_integrate_semi_infinite(
        |v| {
            let g = line_kernel(v, alpha, &inner)?;
            Ok::<_, AnalyticError>(-(-kappa * g).exp_m1())
        },
        spec,
    )?;
    Ok((-2.0 * params.mu_l() * c * outer.value).exp())
}

/// Laplace transform of the aggregate interference, `L_I0(s) · L_I1(s)`.
pub fn laplace_total(s: f64, params: &NetworkParams, spec: &QuadratureSpec) -> Result<f64, AnalyticError> {
    Ok(laplace_i0(s, params) * laplace_i1(s, params, spec)?)
}

/// The three independent factors of the Cox success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoxFactors {
    pub noise: f64,
    pub typical_line: f64,
    pub other_lines: f64,
}

impl CoxFactors {
    pub fn product(&self) -> f64 {
        self.noise * self.typical_line * self.other_lines
    }
}

pub fn cox_factors(params: &NetworkParams, spec: &QuadratureSpec) -> Result<CoxFactors, AnalyticError> {
    let s = link_laplace_argument(params);
    Ok(CoxFactors {
        noise: noise_factor(params),
        typical_line: laplace_i0(s, params),
        other_lines: laplace_i1(s, params, spec)?,
    })
}

fn limit_1d_exponent(params: &NetworkParams) -> f64 {
    let alpha = params.alpha();
    2.0 * params.lambda_line_active() * params.beta().powf(1.0 / alpha) * params.d() * rational_kernel_integral(alpha)
}

fn limit_2d_exponent(params: &NetworkParams) -> f64 {
    // π² p λ_l λ_v = π λ_active
    let alpha = params.alpha();
    PI * params.lambda_active()
        * params.beta().powf(2.0 / alpha)
        * params.d().powi(2)
        * rational_kernel_integral(0.5 * alpha)
}

/// Probability that the typical link's SINR exceeds `beta`.
pub fn success_probability(
    params: &NetworkParams,
    model: PcModel,
    spec: &QuadratureSpec,
) -> Result<f64, AnalyticError> {
    if params.beta() == 0.0 {
        return Ok(1.0);
    }
    match model {
        PcModel::Cox => Ok(cox_factors(params, spec)?.product()),
        PcModel::Limit1D => Ok(noise_factor(params) * (-limit_1d_exponent(params)).exp()),
        PcModel::Limit2D => Ok(noise_factor(params) * (-limit_2d_exponent(params)).exp()),
    }
}

/// Area spectral efficiency together with its two ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AseResult {
    /// bits/s/Hz/km²
    pub ase: f64,
    pub pc: f64,
    /// km⁻²
    pub lambda_active: f64,
}

impl AseResult {
    fn new(pc: f64, lambda_active: f64, beta: f64) -> Self {
        Self {
            ase: lambda_active * pc * (1.0 + beta).log2(),
            pc,
            lambda_active,
        }
    }
}

pub fn ase(params: &NetworkParams, model: PcModel, spec: &QuadratureSpec) -> Result<AseResult, AnalyticError> {
    let pc = success_probability(params, model, spec)?;
    Ok(AseResult::new(pc, params.lambda_active(), params.beta()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalP {
    pub p_star: f64,
    pub ase_star: f64,
    /// Golden-section iterations (zero for the closed-form limits).
    pub iterations: usize,
}

/// Points of the coarse grid used to bracket the Cox optimum.
pub const OPTIMAL_P_GRID: usize = 32;
/// Absolute tolerance on the Cox optimum.
pub const OPTIMAL_P_TOL: f64 = 1e-4;

/// Transmission probability in `(0, 1]` that maximizes the ASE. The `p`
/// field of `params` is ignored.
pub fn optimal_p(params: &NetworkParams, model: PcModel, spec: &QuadratureSpec) -> Result<OptimalP, AnalyticError> {
    let ase_at = |p: f64| -> Result<f64, AnalyticError> {
        let at = params.with(|raw| raw.p = p)?;
        Ok(ase(&at, model, spec)?.ase)
    };
    let closed_form = |p_star: f64| -> Result<OptimalP, AnalyticError> {
        let p_star = if p_star.is_nan() { 1.0 } else { p_star.min(1.0) };
        Ok(OptimalP {
            p_star,
            ase_star: ase_at(p_star)?,
            iterations: 0,
        })
    };
    match model {
        PcModel::Limit1D => {
            let at_one = params.with(|raw| raw.p = 1.0)?;
            closed_form(1.0 / limit_1d_exponent(&at_one))
        }
        PcModel::Limit2D => {
            let at_one = params.with(|raw| raw.p = 1.0)?;
            closed_form(1.0 / limit_2d_exponent(&at_one))
        }
        PcModel::Cox => cox_optimal_p(ase_at),
    }
}

fn cox_optimal_p(mut ase_at: impl FnMut(f64) -> Result<f64, AnalyticError>) -> Result<OptimalP, AnalyticError> {
    let grid: Vec<f64> = (1..=OPTIMAL_P_GRID).map(|i| i as f64 / OPTIMAL_P_GRID as f64).collect();
    let values = grid.iter().map(|&p| ase_at(p)).collect::<Result<Vec<_>, _>>()?;

    let maxima = (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] > values[i + 1])
        .count();
    if maxima >= 2 {
        return Err(AnalyticError::NonUnimodalObjective { maxima });
    }
    let best = (0..values.len()).fold(0, |b, i| if values[i] > values[b] { i } else { b });
    if values[best] <= 0.0 {
        // Identically zero ASE: every p is optimal; report full access.
        return Ok(OptimalP {
            p_star: 1.0,
            ase_star: 0.0,
            iterations: 0,
        });
    }

    let mut lo = if best == 0 { 0.0 } else { grid[best - 1] };
    let mut hi = if best + 1 == grid.len() { 1.0 } else { grid[best + 1] };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = ase_at(x1)?;
    let mut f2 = ase_at(x2)?;
    let mut iterations = 0;
    while hi - lo > OPTIMAL_P_TOL {
        iterations += 1;
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = ase_at(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = ase_at(x1)?;
        }
    }
    let (mut p_star, mut ase_star) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    if values[best] > ase_star {
        p_star = grid[best];
        ase_star = values[best];
    }
    Ok(OptimalP {
        p_star,
        ase_star,
        iterations,
    })
}
