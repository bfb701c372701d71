//! Sampling of the road network and the active transmitters on it.
//!
//! The observation window is a disc of radius `R` centred on the typical
//! receiver. Lines are generated ring by ring in ρ and transmitters block by
//! block along each line, each ring and block drawing from its own keyed
//! stream. A window of radius `R` therefore sees exactly the subset of the
//! points a window of radius `R' > R` sees under the same key.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use super::stream::StreamKey;
use crate::error::SimError;
use crate::params::NetworkParams;

/// Ring width in ρ and block length along lines, km.
pub const BLOCK_KM: f64 = 0.5;

/// A road in (ρ, θ) form: ρ is the distance from the origin to the line and
/// θ the direction of the foot of the perpendicular.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub rho: f64,
    pub theta: f64,
}

/// An active transmitter on a line. `offset` is the signed position along
/// the line measured from the foot of the perpendicular (from the receiver
/// on the typical line); `tag` identifies it across nested windows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interferer {
    pub offset: f64,
    pub tag: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineInterferers {
    pub line: Line,
    pub interferers: Vec<Interferer>,
}

/// One snapshot of the network as seen from the typical receiver at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct CoxRealization {
    pub window_radius: f64,
    pub other_lines: Vec<LineInterferers>,
    /// Interferers on the typical line, which passes through the origin at angle 0.
    pub typical_line_interferers: Vec<Interferer>,
    /// The desired transmitter sits at `+d` on the typical line and is never
    /// an interferer.
    pub desired_tx_offset: f64,
}

impl CoxRealization {
    pub fn interferer_count(&self) -> usize {
        self.typical_line_interferers.len() + self.other_lines.iter().map(|l| l.interferers.len()).sum::<usize>()
    }
}

const TAG_LINES: u64 = 1;
const TAG_TYPICAL: u64 = 2;

fn poisson(mean: f64) -> Option<Poisson<f64>> {
    (mean > 0.0).then(|| Poisson::new(mean).expect("finite positive mean"))
}

/// Poisson count law for one along-line block, with its mean kept for sizing.
struct BlockLaw {
    law: Poisson<f64>,
    mean: f64,
}

impl BlockLaw {
    fn new(mean: f64) -> Option<Self> {
        poisson(mean).map(|law| Self { law, mean })
    }
}

struct KeyedLine {
    line: Line,
    key: StreamKey,
}

fn sample_lines(lambda_l: f64, window_radius: f64, key: StreamKey) -> Vec<KeyedLine> {
    let Some(count) = poisson(2.0 * PI * lambda_l * BLOCK_KM) else {
        return Vec::new();
    };
    let rings = (window_radius / BLOCK_KM).ceil() as u64;
    let mut lines = Vec::new();
    for ring in 0..rings {
        let ring_key = key.child(ring);
        let mut rng = ring_key.rng();
        let n = count.sample(&mut rng) as u64;
        for i in 0..n {
            let rho = (ring as f64 + rng.random::<f64>()) * BLOCK_KM;
            let theta = rng.random::<f64>() * 2.0 * PI;
            if rho <= window_radius {
                lines.push(KeyedLine {
                    line: Line { rho, theta },
                    key: ring_key.child(i + 1),
                });
            }
        }
    }
    lines
}

/// Lines of a Poisson line process with representation-space density
/// `lambda_l` that hit the disc of radius `window_radius`.
pub fn sample_plp(lambda_l: f64, window_radius: f64, key: StreamKey) -> Vec<Line> {
    sample_lines(lambda_l, window_radius, key)
        .into_iter()
        .map(|k| k.line)
        .collect()
}

/// Homogeneous 1D Poisson points of the given per-block law on `[-half, half]`.
fn sample_segment(per_block: &BlockLaw, half: f64, key: StreamKey) -> Vec<Interferer> {
    let first = (-half / BLOCK_KM).floor() as i64;
    let last = (half / BLOCK_KM).floor() as i64;
    let expected = per_block.mean * 2.0 * half / BLOCK_KM;
    let mut points = Vec::with_capacity((expected + 3.0 * expected.sqrt()) as usize + 1);
    for block in first..=last {
        let block_key = key.child_signed(block);
        let mut rng = block_key.rng();
        let n = per_block.law.sample(&mut rng) as u64;
        for i in 0..n {
            let offset = (block as f64 + rng.random::<f64>()) * BLOCK_KM;
            if offset.abs() <= half {
                points.push(Interferer {
                    offset,
                    tag: block_key.id().wrapping_add(i),
                });
            }
        }
    }
    points
}

/// Samples the network under the Palm distribution: a Poisson line process
/// plus the typical line through the origin, each carrying active
/// transmitters at intensity `p · lambda_v`.
pub fn sample_realization(
    params: &NetworkParams,
    window_radius: f64,
    key: StreamKey,
) -> Result<CoxRealization, SimError> {
    if !window_radius.is_finite() || window_radius <= params.d() {
        return Err(SimError::WindowTooSmall {
            radius: window_radius,
            d: params.d(),
        });
    }
    let per_block = BlockLaw::new(params.lambda_line_active() * BLOCK_KM);
    let lines = sample_lines(params.lambda_l(), window_radius, key.child(TAG_LINES));
    let r2 = window_radius * window_radius;
    let other_lines = lines
        .into_iter()
        .map(|k| {
            let interferers = match &per_block {
                Some(law) => {
                    let half = (r2 - k.line.rho * k.line.rho).max(0.0).sqrt();
                    sample_segment(law, half, k.key)
                }
                None => Vec::new(),
            };
            LineInterferers {
                line: k.line,
                interferers,
            }
        })
        .collect();
    let typical_line_interferers = match &per_block {
        Some(law) => sample_segment(law, window_radius, key.child(TAG_TYPICAL)),
        None => Vec::new(),
    };
    Ok(CoxRealization {
        window_radius,
        other_lines,
        typical_line_interferers,
        desired_tx_offset: params.d(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::RawParams;
    use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, Poisson as PoissonPmf};

    /// Pearson chi-square goodness of fit of `counts` against Poisson(mean),
    /// tail bins pooled to keep expected counts ≥ 5. Returns the p-value.
    fn poisson_gof(counts: &[u64], mean: f64) -> f64 {
        let n = counts.len() as f64;
        let pmf = PoissonPmf::new(mean).unwrap();
        let max = *counts.iter().max().unwrap();
        let mut bins: Vec<(u64, u64, f64)> = Vec::new(); // (lo, hi, expected)
        let mut lo = 0;
        let mut acc = 0.0;
        for k in 0..=max + 1 {
            acc += pmf.pmf(k) * n;
            if acc >= 5.0 {
                bins.push((lo, k, acc));
                lo = k + 1;
                acc = 0.0;
            }
        }
        // Fold the remaining tail (including > max) into the last bin.
        let head: f64 = bins[..bins.len() - 1].iter().map(|b| b.2).sum();
        let last = bins.last_mut().unwrap();
        last.1 = u64::MAX;
        last.2 = n - head;
        let stat: f64 = bins
            .iter()
            .map(|&(lo, hi, expected)| {
                let observed = counts.iter().filter(|&&c| c >= lo && c <= hi).count() as f64;
                (observed - expected).powi(2) / expected
            })
            .sum();
        let dof = (bins.len() - 1) as f64;
        1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
    }

    fn params(mu_l: f64, lambda_v: f64, p: f64) -> NetworkParams {
        RawParams {
            mu_l,
            lambda_v,
            p,
            ..RawParams::default()
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn empty_line_process() {
        for seed in 0..20 {
            assert!(sample_plp(0.0, 2.0, StreamKey::new(seed)).is_empty());
        }
    }

    #[test]
    fn line_counts_are_poisson() {
        let mu_l = 10.0;
        let radius = 2.0;
        let counts: Vec<u64> = (0..10_000)
            .map(|i| {
                let lines = sample_plp(mu_l / PI, radius, StreamKey::new(99).child(i));
                for l in &lines {
                    assert!(l.rho >= 0.0 && l.rho <= radius);
                    assert!(l.theta >= 0.0 && l.theta < 2.0 * PI);
                }
                lines.len() as u64
            })
            .collect();
        let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
        let expected = mu_l * 2.0 * radius;
        let sigma = (expected / counts.len() as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sigma, "{mean}");
        assert!(poisson_gof(&counts, expected) > 0.01);
    }

    #[test]
    fn rho_is_uniform() {
        let radius = 1.7;
        let mut rhos = Vec::new();
        for i in 0..2000 {
            rhos.extend(
                sample_plp(5.0, radius, StreamKey::new(5).child(i))
                    .iter()
                    .map(|l| l.rho / radius),
            );
        }
        rhos.sort_by(f64::total_cmp);
        let n = rhos.len() as f64;
        let ks = rhos
            .iter()
            .enumerate()
            .map(|(i, &u)| (u - i as f64 / n).abs().max(((i + 1) as f64 / n - u).abs()))
            .fold(0.0, f64::max);
        // Kolmogorov–Smirnov critical value at 0.01.
        assert!(ks < 1.63 / n.sqrt(), "ks = {ks}");
    }

    #[test]
    fn silent_network_has_no_interferers() {
        let r = sample_realization(&params(10.0, 20.0, 0.0), 2.0, StreamKey::new(1)).unwrap();
        assert_eq!(r.interferer_count(), 0);
        assert!(!r.other_lines.is_empty());
        assert_eq!(r.desired_tx_offset, 0.01);
    }

    #[test]
    fn no_roads_keeps_typical_line() {
        let r = sample_realization(&params(0.0, 20.0, 1.0), 2.0, StreamKey::new(2)).unwrap();
        assert!(r.other_lines.is_empty());
        assert!(!r.typical_line_interferers.is_empty());
    }

    #[test]
    fn window_invariants() {
        let radius = 2.0;
        for i in 0..50 {
            let r = sample_realization(&params(10.0, 20.0, 0.5), radius, StreamKey::new(3).child(i)).unwrap();
            for l in &r.other_lines {
                assert!(l.line.rho <= radius);
                for w in &l.interferers {
                    assert!(w.offset * w.offset + l.line.rho * l.line.rho <= radius * radius);
                }
            }
            for w in &r.typical_line_interferers {
                assert!(w.offset.abs() <= radius);
            }
        }
    }

    #[test]
    fn rejects_window_inside_link() {
        let err = sample_realization(&params(1.0, 1.0, 1.0), 0.005, StreamKey::new(0)).unwrap_err();
        assert!(matches!(err, SimError::WindowTooSmall { .. }));
    }

    #[test]
    fn per_line_counts_match_chord_length() {
        // Condition on ρ by sampling segments directly with a fixed half-chord.
        let lambda = 0.5 * 20.0;
        let radius = 2.0;
        let law = BlockLaw::new(lambda * BLOCK_KM).unwrap();
        for rho in [0.0, 0.7, 1.9] {
            let half = f64::sqrt(radius * radius - rho * rho);
            let counts: Vec<u64> = (0..4000)
                .map(|i| sample_segment(&law, half, StreamKey::new(8).child(i)).len() as u64)
                .collect();
            let expected = lambda * 2.0 * half;
            let mean = counts.iter().sum::<u64>() as f64 / counts.len() as f64;
            assert!(
                (mean - expected).abs() < 4.0 * (expected / counts.len() as f64).sqrt(),
                "rho={rho} mean={mean}"
            );
            assert!(poisson_gof(&counts, expected) > 0.01, "rho={rho}");
        }
    }

    #[test]
    fn nested_windows_share_points() {
        let p = params(10.0, 20.0, 0.5);
        for i in 0..20 {
            let key = StreamKey::new(4).child(i);
            let small = sample_realization(&p, 1.3, key).unwrap();
            let large = sample_realization(&p, 2.6, key).unwrap();
            for w in &small.typical_line_interferers {
                assert!(large.typical_line_interferers.contains(w));
            }
            for l in &small.other_lines {
                let twin = large.other_lines.iter().find(|m| m.line == l.line).expect("line kept");
                for w in &l.interferers {
                    assert!(twin.interferers.contains(w));
                }
            }
        }
    }
}
