//! Signal-path primitives of the front end: saturation, gain control and
//! scalar uniform quantization, composed into the full cascade
//! `y = Q_b(sqrt(alpha) * S(r + z))`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::GaussLegendre;
use crate::radial;
use crate::special::normal_pdf;

/// Complex baseband sample in normalized amplitude units.
pub type ComplexSample = Complex64;

/// Shape of the radial saturation `phi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaturationKind {
    /// `phi(u) = tanh(u)`.
    #[default]
    Tanh,
    /// `phi(u) = min(u, 1)`.
    Clip,
}

impl SaturationKind {
    pub fn phi(self, u: f64) -> f64 {
        match self {
            SaturationKind::Tanh => u.tanh(),
            SaturationKind::Clip => u.min(1.0),
        }
    }
}

/// The configuration being analyzed: noise figure, saturation energy,
/// resolution and saturation shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfeKnobs {
    /// Linear noise figure, strictly above 1.
    pub noise_figure: f64,
    /// Saturation energy per symbol in Joules. `f64::INFINITY` models an
    /// unbounded linear range.
    pub e_max: f64,
    /// ADC bits per real dimension. Rational values are only meaningful for
    /// the vector-quantizer model.
    pub bits: f64,
    pub sat_kind: SaturationKind,
}

impl RfeKnobs {
    pub fn new(noise_figure: f64, e_max: f64, bits: f64, sat_kind: SaturationKind) -> Result<Self> {
        if !(noise_figure > 1.0) || !noise_figure.is_finite() {
            return Err(invalid(format!("noise figure must be > 1 (linear), got {noise_figure}")));
        }
        if !(e_max > 0.0) {
            return Err(invalid(format!("saturation energy must be > 0, got {e_max}")));
        }
        if !(bits > 0.0) || !bits.is_finite() {
            return Err(invalid(format!("resolution must be > 0 bits, got {bits}")));
        }
        Ok(Self { noise_figure, e_max, bits, sat_kind })
    }

    /// Knobs whose saturation level sits `backoff` above the input energy
    /// `e_r + n0`.
    pub fn from_backoff(
        noise_figure: f64,
        backoff: f64,
        bits: f64,
        sat_kind: SaturationKind,
        e_r: f64,
        n0: f64,
    ) -> Result<Self> {
        if !(backoff > 0.0) {
            return Err(invalid(format!("backoff must be > 0, got {backoff}")));
        }
        Self::new(noise_figure, backoff * (e_r + n0), bits, sat_kind)
    }

    /// Integer resolution, if `bits` is a whole number in `1..=12`.
    pub fn integer_bits(&self) -> Result<u32> {
        let b = self.bits.round();
        if (self.bits - b).abs() > 1e-12 || !(1.0..=12.0).contains(&b) {
            return Err(invalid(format!(
                "scalar uniform quantization needs integer bits in 1..=12, got {}",
                self.bits
            )));
        }
        Ok(b as u32)
    }
}

/// Mid-rise uniform quantizer applied independently to I and Q.
///
/// Levels sit at `±(k + 1/2) * step` for `k = 0 .. 2^(bits-1) - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantizerSpec {
    pub bits: u32,
    pub step: f64,
}

impl QuantizerSpec {
    pub fn new(bits: u32, step: f64) -> Result<Self> {
        if !(1..=MAX_BITS).contains(&bits) {
            return Err(invalid(format!("bits must be in 1..={MAX_BITS}, got {bits}")));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(invalid(format!("quantizer step must be > 0, got {step}")));
        }
        Ok(Self { bits, step })
    }

    /// MSE-optimal quantizer for a unit-energy circular Gaussian input.
    ///
    /// Each real dimension then has variance 1/2, so the unit-variance
    /// optimal step is scaled by `1/sqrt(2)`.
    pub fn for_unit_energy(bits: u32) -> Result<Self> {
        Self::new(bits, quantizer_step(bits)? * FRAC_1_SQRT_2)
    }

    /// Number of positive reconstruction levels, `2^(bits-1)`.
    pub fn half_levels(&self) -> usize {
        1usize << (self.bits - 1)
    }

    /// Largest reconstruction level.
    pub fn outer_level(&self) -> f64 {
        (self.half_levels() as f64 - 0.5) * self.step
    }

    fn quantize_real(&self, x: f64) -> f64 {
        let k = self.half_levels() as f64;
        let idx = (x / self.step).floor().clamp(-k, k - 1.0);
        (idx + 0.5) * self.step
    }
}

pub const MAX_BITS: u32 = 12;

/// `S(v) = sqrt(e_max) * phi(|v| / sqrt(e_max)) * v / |v|`.
pub fn saturate(v: ComplexSample, e_max: f64, kind: SaturationKind) -> Result<ComplexSample> {
    check_finite(v)?;
    if !(e_max > 0.0) {
        return Err(invalid(format!("saturation energy must be > 0, got {e_max}")));
    }
    let mag = v.norm();
    if mag == 0.0 || e_max == f64::INFINITY {
        return Ok(v);
    }
    let root = e_max.sqrt();
    Ok(v * (root * kind.phi(mag / root) / mag))
}

/// MSE-minimizing step of a `bits`-bit mid-rise quantizer for a
/// unit-variance real Gaussian input. Cached per resolution.
pub fn quantizer_step(bits: u32) -> Result<f64> {
    static STEPS: [OnceLock<f64>; MAX_BITS as usize] = [const { OnceLock::new() }; MAX_BITS as usize];
    if !(1..=MAX_BITS).contains(&bits) {
        return Err(invalid(format!("bits must be in 1..={MAX_BITS}, got {bits}")));
    }
    Ok(*STEPS[bits as usize - 1].get_or_init(|| optimize_step(bits)))
}

/// Golden-section search on `ln(step)`.
fn optimize_step(bits: u32) -> f64 {
    let f = |ln_step: f64| gaussian_quantizer_mse(ln_step.exp(), bits);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (1e-4f64.ln(), 4f64.ln());
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > 1e-10 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (0.5 * (a + b)).exp()
}

fn cell_rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Beyond this many standard deviations the Gaussian mass is below 1e-32.
const GAUSS_TAIL: f64 = 12.0;

/// `E[(x - Q(x))^2]` for `x ~ N(0, 1)`, accumulated cell by cell.
pub(crate) fn gaussian_quantizer_mse(step: f64, bits: u32) -> f64 {
    let gl = cell_rule();
    let half = 1usize << (bits - 1);
    let mut total = 0.0;
    for k in 0..half {
        let lo = k as f64 * step;
        if lo > GAUSS_TAIL {
            break;
        }
        let level = (k as f64 + 0.5) * step;
        let err = |x: f64| (x - level) * (x - level) * normal_pdf(x);
        total += if k + 1 < half { gl.integrate(lo, lo + step, err) } else { unbounded_cell(gl, lo, err) };
    }
    2.0 * total
}

/// `(E[x Q(x)], E[Q(x)^2])` for `x ~ N(0, 1)` and a quantizer with the given
/// step on the unit-variance scale.
pub(crate) fn gaussian_quantizer_moments(step: f64, bits: u32) -> (f64, f64) {
    let gl = cell_rule();
    let half = 1usize << (bits - 1);
    let (mut cross, mut power) = (0.0, 0.0);
    for k in 0..half {
        let lo = k as f64 * step;
        if lo > GAUSS_TAIL {
            break;
        }
        let level = (k as f64 + 0.5) * step;
        let (m1, m0) = if k + 1 < half {
            (gl.integrate(lo, lo + step, |x| x * normal_pdf(x)), gl.integrate(lo, lo + step, normal_pdf))
        } else {
            (unbounded_cell(gl, lo, |x| x * normal_pdf(x)), unbounded_cell(gl, lo, normal_pdf))
        };
        cross += level * m1;
        power += level * level * m0;
    }
    (2.0 * cross, 2.0 * power)
}

fn unbounded_cell<F: FnMut(f64) -> f64>(gl: &GaussLegendre, lo: f64, mut f: F) -> f64 {
    let hi = lo.max(0.0) + GAUSS_TAIL;
    let panels = (hi - lo).ceil() as usize;
    let width = (hi - lo) / panels as f64;
    (0..panels)
        .map(|i| {
            let a = lo + i as f64 * width;
            gl.integrate(a, a + width, &mut f)
        })
        .sum()
}

/// Quantizes I and Q independently to the nearest mid-rise level.
pub fn quantize(u: ComplexSample, spec: &QuantizerSpec) -> Result<ComplexSample> {
    check_finite(u)?;
    Ok(ComplexSample::new(spec.quantize_real(u.re), spec.quantize_real(u.im)))
}

/// Gain `alpha = 1 / E[|S(v)|^2]` for `v ~ CN(0, e_r + n0)`.
///
/// The expectation runs through the same radial quadrature as
/// [`crate::metrics::rho_sq_numeric`].
pub fn gain_alpha(e_r: f64, n0: f64, knobs: &RfeKnobs) -> Result<f64> {
    if !(e_r >= 0.0) || !(n0 > 0.0) {
        return Err(invalid(format!("need e_r >= 0 and n0 > 0, got e_r={e_r}, n0={n0}")));
    }
    let input = e_r + n0;
    if !(input > 0.0) || !input.is_finite() {
        return Err(invalid("degenerate input energy"));
    }
    if knobs.e_max == f64::INFINITY {
        return Ok(1.0 / input);
    }
    let nu = knobs.e_max / input;
    let beta = radial::beta(nu, knobs.sat_kind, &radial::default_rule())?;
    Ok(1.0 / (knobs.e_max * beta))
}

/// Full cascade `Q_b(sqrt(alpha) * S(r + z))`.
pub fn apply_rfe(
    r: ComplexSample,
    z: ComplexSample,
    knobs: &RfeKnobs,
    spec: &QuantizerSpec,
    alpha: f64,
) -> Result<ComplexSample> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(invalid(format!("gain must be finite and > 0, got {alpha}")));
    }
    let v = r + z;
    let s = saturate(v, knobs.e_max, knobs.sat_kind)?;
    quantize(s * alpha.sqrt(), spec)
}

fn check_finite(v: ComplexSample) -> Result<()> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("non-finite sample {v}")))
    }
}
