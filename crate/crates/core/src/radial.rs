//! Radial quadrature for expectations over a unit circular Gaussian input.
//!
//! Saturation acts on the modulus only, so with `v = R e^{jθ}` the angular
//! average of the quantizer output has a closed form for every radius. What
//! remains is a one-dimensional integral over the Rayleigh radius, split at
//! every radius where the saturated amplitude crosses a quantizer threshold.
//! Each crossing leaves a square-root kink at the left edge of its panel,
//! which the `x = a + h s^2` substitution smooths away.

use std::f64::consts::PI;

use crate::error::{invalid, Result, RfeError};
use crate::model::{QuantizerSpec, SaturationKind};
use crate::quadrature::GaussLegendre;

/// Rayleigh mass beyond this radius is `e^{-56}`.
const R_MAX: f64 = 7.5;

/// Absolute change in `rho^2` tolerated when the node count is doubled.
pub(crate) const SELF_CHECK_TOL: f64 = 1e-6;

pub(crate) const DEFAULT_NODES: usize = 16;

pub(crate) fn default_rule() -> GaussLegendre {
    GaussLegendre::new(DEFAULT_NODES)
}

/// First and second output moments of the normalized cascade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct CascadeMoments {
    /// `E|S1(v)|^2`.
    pub beta: f64,
    /// `E[v* y]`, real by circular symmetry.
    pub cross: f64,
    /// `E|y|^2`.
    pub out_power: f64,
}

impl CascadeMoments {
    pub fn rho_sq(&self) -> f64 {
        (self.cross * self.cross / self.out_power).clamp(0.0, 1.0)
    }
}

fn rayleigh(r: f64) -> f64 {
    2.0 * r * (-r * r).exp()
}

fn panel_width(nu: f64) -> f64 {
    if nu.is_finite() {
        nu.sqrt().clamp(0.05, 0.75)
    } else {
        0.75
    }
}

/// Panel edges covering `[start, R_MAX]` with `breaks` inserted and no panel
/// wider than `width`.
fn panel_edges(start: f64, breaks: &[f64], width: f64) -> Vec<f64> {
    let mut anchors: Vec<f64> = std::iter::once(start)
        .chain(breaks.iter().copied().filter(|&b| b > start && b < R_MAX))
        .chain(std::iter::once(R_MAX))
        .collect();
    anchors.sort_by(f64::total_cmp);
    anchors.dedup();
    let mut edges = vec![anchors[0]];
    for pair in anchors.windows(2) {
        let n = ((pair[1] - pair[0]) / width).ceil().max(1.0) as usize;
        let h = (pair[1] - pair[0]) / n as f64;
        edges.extend((1..=n).map(|i| pair[0] + i as f64 * h));
    }
    edges
}

fn kink_breaks(nu: f64, kind: SaturationKind) -> Vec<f64> {
    match kind {
        SaturationKind::Clip if nu.is_finite() => vec![nu.sqrt()],
        _ => Vec::new(),
    }
}

/// `beta = E[phi(R / sqrt(nu))^2]` with `R` Rayleigh, `E[R^2] = 1`.
pub(crate) fn beta(nu: f64, kind: SaturationKind, gl: &GaussLegendre) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(invalid(format!("backoff must be > 0, got {nu}")));
    }
    if nu == f64::INFINITY {
        return Ok(0.0);
    }
    let root = nu.sqrt();
    let edges = panel_edges(0.0, &kink_breaks(nu, kind), panel_width(nu));
    Ok(edges
        .windows(2)
        .map(|p| {
            gl.integrate(p[0], p[1], |r| {
                let s = kind.phi(r / root);
                s * s * rayleigh(r)
            })
        })
        .sum())
}

/// Amplitude fed to the quantizer as a function of the input radius.
struct Amplitude {
    kind: SaturationKind,
    root_nu: f64,
    /// `1 / sqrt(beta)`; the gain that normalizes the ADC input energy.
    gain: f64,
}

impl Amplitude {
    fn new(nu: f64, kind: SaturationKind, beta: f64) -> Self {
        if nu == f64::INFINITY {
            Self { kind, root_nu: f64::INFINITY, gain: 1.0 }
        } else {
            Self { kind, root_nu: nu.sqrt(), gain: 1.0 / beta.sqrt() }
        }
    }

    fn at(&self, r: f64) -> f64 {
        if self.root_nu == f64::INFINITY {
            r
        } else {
            self.gain * self.kind.phi(r / self.root_nu)
        }
    }

    /// Radius at which the amplitude reaches `t`, if it ever does.
    fn inverse(&self, t: f64) -> Option<f64> {
        if self.root_nu == f64::INFINITY {
            return Some(t);
        }
        let x = t / self.gain;
        if x >= 1.0 {
            return None;
        }
        Some(match self.kind {
            SaturationKind::Tanh => self.root_nu * x.atanh(),
            SaturationKind::Clip => self.root_nu * x,
        })
    }
}

/// Moments of `y = Q(S1(v) / sqrt(beta))` for `v ~ CN(0, 1)`.
///
/// `nu = f64::INFINITY` gives the unsaturated (quantization-only) cascade.
pub(crate) fn cascade_moments(
    spec: &QuantizerSpec,
    nu: f64,
    kind: SaturationKind,
    gl: &GaussLegendre,
) -> Result<CascadeMoments> {
    let beta = beta(nu, kind, gl)?;
    let amp = Amplitude::new(nu, kind, beta);
    let step = spec.step;
    let breaks = kink_breaks(nu, kind);
    let width = panel_width(nu);

    // Angular averages, per threshold t reached at amplitude A:
    //   E_θ[cos θ 1{A cos θ > t}] = sqrt(1 - t²/A²) / π
    //   P_θ(A cos θ > t)          = acos(t/A) / π
    let mut sum_sin = 0.0;
    let mut sum_angle = 0.0;
    for k in 1..spec.half_levels() {
        let t = k as f64 * step;
        let Some(start) = amp.inverse(t) else { break };
        if start >= R_MAX {
            break;
        }
        let edges = panel_edges(start, &breaks, width);
        let (mut j_sin, mut j_angle) = (0.0, 0.0);
        for (i, p) in edges.windows(2).enumerate() {
            let integrand = |r: f64| {
                let ratio = (t / amp.at(r)).min(1.0);
                let w = rayleigh(r);
                ((1.0 - ratio * ratio).sqrt() * r * w, ratio.acos() * w)
            };
            let (a, b) = if i == 0 {
                (
                    gl.integrate_sqrt_left(p[0], p[1], |r| integrand(r).0),
                    gl.integrate_sqrt_left(p[0], p[1], |r| integrand(r).1),
                )
            } else {
                (gl.integrate(p[0], p[1], |r| integrand(r).0), gl.integrate(p[0], p[1], |r| integrand(r).1))
            };
            j_sin += a;
            j_angle += b;
        }
        sum_sin += j_sin;
        sum_angle += k as f64 * j_angle;
    }

    let mean_radius = PI.sqrt() / 2.0;
    let cross = (4.0 / PI) * (0.5 * step * mean_radius + step * sum_sin);
    let out_power = 2.0 * (0.25 * step * step + (4.0 * step * step / PI) * sum_angle);
    if !(out_power > 0.0) || !cross.is_finite() {
        return Err(RfeError::InvalidArgument("degenerate cascade moments".into()));
    }
    Ok(CascadeMoments { beta, cross, out_power })
}

/// [`cascade_moments`] with the order-doubling self-check.
pub(crate) fn checked_cascade_moments(
    spec: &QuantizerSpec,
    nu: f64,
    kind: SaturationKind,
    nodes: usize,
) -> Result<CascadeMoments> {
    let coarse = cascade_moments(spec, nu, kind, &GaussLegendre::new(nodes))?;
    let fine = cascade_moments(spec, nu, kind, &GaussLegendre::new(2 * nodes))?;
    let (a, b) = (coarse.rho_sq(), fine.rho_sq());
    if (a - b).abs() > SELF_CHECK_TOL {
        return Err(RfeError::Accuracy { value: a, refined: b, tolerance: SELF_CHECK_TOL });
    }
    Ok(fine)
}
