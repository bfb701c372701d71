//! Adaptive quadrature over `[0, ∞)`.
//!
//! The half-line is mapped onto `[0, 1)` with `x = t / (1 - t)` and the
//! transformed integrand is integrated by globally adaptive bisection with a
//! 15-point Gauss–Kronrod rule (embedded 7-point Gauss rule for the error
//! estimate). The Kronrod rule is exact for polynomials of degree 22. Panel
//! selection is deterministic, so a given build always produces the same bits.

use crate::error::QuadratureError;

/// Tolerances and refinement limits for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any single panel.
    pub max_subdivisions: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_subdivisions: 60,
        }
    }
}

impl QuadratureSpec {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: u32) -> Result<Self, QuadratureError> {
        let spec = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<(), QuadratureError> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(QuadratureError::InvalidSpec("rel_tol must be > 0"));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(QuadratureError::InvalidSpec("abs_tol must be > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(QuadratureError::InvalidSpec("max_subdivisions must be >= 1"));
        }
        Ok(())
    }

    /// Same spec with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
    /// Number of integrand evaluations.
    pub evaluations: usize,
}

// Hard cap on the number of live panels, independent of depth.
const MAX_PANELS: usize = 4096;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

fn gauss_kronrod<E>(g: &mut impl FnMut(f64) -> Result<f64, E>, a: f64, b: f64) -> Result<(f64, f64), E> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = g(center)?;
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    let mut abs_sum = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, node) in XGK.iter().take(7).enumerate() {
        let dx = half * node;
        let f1 = g(center - dx)?;
        let f2 = g(center + dx)?;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
        fv[j] = (f1, f2);
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (f_center - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let abs_sum = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    if abs_sum > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_sum);
    }
    Ok((value, err))
}

/// Integrates a fallible integrand over `[0, ∞)`. Integrand errors abort the
/// integration and are returned unchanged.
pub fn try_integrate_semi_infinite<E, F>(mut f: F, spec: &QuadratureSpec) -> Result<Integral, E>
where
    E: From<QuadratureError>,
    F: FnMut(f64) -> Result<f64, E>,
{
    spec.check()?;
    let mut evaluations = 0usize;
    let mut g = |t: f64| -> Result<f64, E> {
        evaluations += 1;
        let one_minus = 1.0 - t;
        let x = t / one_minus;
        let y = f(x)? / (one_minus * one_minus);
        Ok(if y.is_nan() && x.is_infinite() { 0.0 } else { y })
    };

    let (value, err) = gauss_kronrod(&mut g, 0.0, 1.0)?;
    let mut panels = vec![Panel {
        a: 0.0,
        b: 1.0,
        value,
        err,
        depth: 0,
    }];

    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if !total.is_finite() || !total_err.is_finite() {
            return Err(QuadratureError::NonConvergence {
                value: total,
                err_estimate: total_err,
            }
            .into());
        }
        if total_err <= spec.abs_tol.max(spec.rel_tol * total.abs()) {
            return Ok(Integral {
                value: total,
                err_estimate: total_err,
                evaluations,
            });
        }
        let (worst, _) =
            panels.iter().enumerate().fold(
                (0, f64::NEG_INFINITY),
                |best, (i, p)| {
                    if p.err > best.1 {
                        (i, p.err)
                    } else {
                        best
                    }
                },
            );
        let panel = panels[worst];
        if panel.depth >= spec.max_subdivisions || panels.len() >= MAX_PANELS {
            return Err(QuadratureError::NonConvergence {
                value: total,
                err_estimate: total_err,
            }
            .into());
        }
        let mid = 0.5 * (panel.a + panel.b);
        let (left_value, left_err) = gauss_kronrod(&mut g, panel.a, mid)?;
        let (right_value, right_err) = gauss_kronrod(&mut g, mid, panel.b)?;
        panels[worst] = Panel {
            a: panel.a,
            b: mid,
            value: left_value,
            err: left_err,
            depth: panel.depth + 1,
        };
        panels.push(Panel {
            a: mid,
            b: panel.b,
            value: right_value,
            err: right_err,
            depth: panel.depth + 1,
        });
    }
}

/// Integrates `f` over `[0, ∞)` to the tolerances in `spec`.
///
/// `f` should be finite on `(0, ∞)` and decay faster than `1/x`.
pub fn integrate_semi_infinite<F>(mut f: F, spec: &QuadratureSpec) -> Result<Integral, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok::<_, QuadratureError>(f(x)), spec)
}
