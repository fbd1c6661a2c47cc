//! Input/output correlation, SNDR and spectral efficiency.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_2_PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{gaussian_quantizer_moments, quantize, quantizer_step, QuantizerSpec, SaturationKind, MAX_BITS};
use crate::radial::{self, CascadeMoments, DEFAULT_NODES};
use crate::special::{binary_entropy, q_function};

/// Which `rho^2` model applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum QuantizerModel {
    /// Mid-rise uniform scalar quantizer, evaluated numerically.
    ScalarUniform {
        bits: u32,
    },
    /// Rate-distortion bound of a long-block vector quantizer.
    OptimalVector {
        bits: f64,
    },
    /// `1 - c b 2^(-2b)` with a calibrated `c`.
    Asymptotic {
        bits: f64,
        c: f64,
    },
    OneBit,
}

impl QuantizerModel {
    pub fn bits(&self) -> f64 {
        match *self {
            Self::ScalarUniform { bits } => bits as f64,
            Self::OptimalVector { bits } | Self::Asymptotic { bits, .. } => bits,
            Self::OneBit => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoMethod {
    Quadrature,
    MonteCarlo,
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoResult {
    pub rho_sq: f64,
    pub method: RhoMethod,
    /// Standard error; zero for deterministic methods.
    pub stderr: f64,
}

impl RhoResult {
    fn exact(rho_sq: f64, method: RhoMethod) -> Self {
        Self { rho_sq: rho_sq.clamp(0.0, 1.0), method, stderr: 0.0 }
    }

    pub fn sdr(&self) -> f64 {
        sdr_ceiling(self.rho_sq)
    }
}

/// Signal and noise levels at the RFE input.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    /// `e_r / kT`.
    pub snr_ideal: f64,
    pub noise_figure: f64,
    /// `e_max / (e_r + n0)`.
    pub backoff: f64,
    /// Noise energy `kT F` in Joules.
    pub n0: f64,
    /// Received energy per symbol in Joules.
    pub e_r: f64,
}

impl OperatingPoint {
    pub fn new(snr_ideal: f64, noise_figure: f64, e_max: f64, kt: f64) -> Result<Self> {
        if !(snr_ideal >= 0.0) || !snr_ideal.is_finite() {
            return Err(invalid(format!("snr_ideal must be finite and >= 0, got {snr_ideal}")));
        }
        if !(noise_figure > 1.0) || !noise_figure.is_finite() {
            return Err(invalid(format!("noise figure must be > 1, got {noise_figure}")));
        }
        if !(kt > 0.0) || !kt.is_finite() {
            return Err(invalid(format!("kT must be > 0, got {kt}")));
        }
        if !(e_max > 0.0) {
            return Err(invalid(format!("saturation energy must be > 0, got {e_max}")));
        }
        let n0 = kt * noise_figure;
        let e_r = snr_ideal * kt;
        Ok(Self { snr_ideal, noise_figure, backoff: e_max / (e_r + n0), n0, e_r })
    }

    pub fn with_backoff(snr_ideal: f64, noise_figure: f64, backoff: f64, kt: f64) -> Result<Self> {
        if !(backoff > 0.0) {
            return Err(invalid(format!("backoff must be > 0, got {backoff}")));
        }
        let probe = Self::new(snr_ideal, noise_figure, 1.0, kt)?;
        Ok(Self { backoff, ..probe })
    }

    pub fn e_max(&self) -> f64 {
        self.backoff * (self.e_r + self.n0)
    }
}

/// Node count for the radial quadrature behind [`rho_sq_numeric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureConfig {
    pub nodes_per_panel: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { nodes_per_panel: DEFAULT_NODES }
    }
}

fn check_bits(bits: u32) -> Result<()> {
    if !(1..=MAX_BITS).contains(&bits) {
        return Err(invalid(format!("bits must be in 1..={MAX_BITS}, got {bits}")));
    }
    Ok(())
}

fn check_backoff(nu: f64) -> Result<()> {
    if !(nu > 0.0) {
        return Err(invalid(format!("backoff must be > 0, got {nu}")));
    }
    Ok(())
}

/// `rho^2(b, nu)` by deterministic quadrature. `nu = f64::INFINITY` removes
/// saturation.
///
/// Fails with [`crate::RfeError::Accuracy`] when doubling the node count
/// moves the result by more than `1e-6`.
pub fn rho_sq_numeric(bits: u32, nu: f64, kind: SaturationKind) -> Result<RhoResult> {
    rho_sq_numeric_with(bits, nu, kind, &QuadratureConfig::default())
}

pub fn rho_sq_numeric_with(bits: u32, nu: f64, kind: SaturationKind, cfg: &QuadratureConfig) -> Result<RhoResult> {
    Ok(RhoResult::exact(numeric_moments(bits, nu, kind, cfg)?.rho_sq(), RhoMethod::Quadrature))
}

fn numeric_moments(bits: u32, nu: f64, kind: SaturationKind, cfg: &QuadratureConfig) -> Result<CascadeMoments> {
    check_bits(bits)?;
    check_backoff(nu)?;
    if cfg.nodes_per_panel == 0 {
        return Err(invalid("quadrature needs at least one node"));
    }
    let spec = QuantizerSpec::for_unit_energy(bits)?;
    radial::checked_cascade_moments(&spec, nu, kind, cfg.nodes_per_panel)
}

/// Bussgang gain `E[v* y]` of the normalized cascade, `E|v|^2 = 1`.
pub fn bussgang_gain(bits: u32, nu: f64, kind: SaturationKind) -> Result<f64> {
    Ok(numeric_moments(bits, nu, kind, &QuadratureConfig::default())?.cross)
}

const MC_BATCHES: u64 = 64;
const MIN_MC_SAMPLES: u64 = 10_000;

fn batch_sizes(samples: u64) -> impl Iterator<Item = (u64, u64)> {
    let base = samples / MC_BATCHES;
    let extra = samples % MC_BATCHES;
    (0..MC_BATCHES).map(move |i| (i, base + u64::from(i < extra)))
}

fn batch_rng(seed: u64, batch: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng
}

fn draw(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * FRAC_1_SQRT_2
}

/// Unit-level saturation `S1(v) = phi(|v| / sqrt(nu)) v / |v|`.
fn s1(v: Complex64, nu: f64, kind: SaturationKind) -> Complex64 {
    if nu == f64::INFINITY {
        return v;
    }
    let m = v.norm();
    if m == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    v * (kind.phi(m / nu.sqrt()) / m)
}

/// Per-batch sums over the normalized cascade, visiting the samples of
/// every batch in a fixed order.
fn mc_pass<T, F>(samples: u64, seed: u64, per_batch: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let batches: Vec<(u64, u64)> = batch_sizes(samples).collect();
    batches.par_iter().map(|&(b, n)| per_batch(&mut batch_rng(seed, b), n)).collect()
}

struct McSamples {
    nu: f64,
    kind: SaturationKind,
    spec: QuantizerSpec,
    gain: f64,
}

impl McSamples {
    fn new(bits: u32, nu: f64, kind: SaturationKind, samples: u64, seed: u64) -> Result<Self> {
        check_bits(bits)?;
        check_backoff(nu)?;
        if samples < MIN_MC_SAMPLES {
            return Err(invalid(format!("Monte Carlo needs >= {MIN_MC_SAMPLES} samples")));
        }
        let power: f64 =
            mc_pass(samples, seed, |rng, n| (0..n).map(|_| s1(draw(rng), nu, kind).norm_sqr()).sum::<f64>())
                .into_iter()
                .sum();
        Self::with_beta(bits, nu, kind, power / samples as f64)
    }

    fn with_beta(bits: u32, nu: f64, kind: SaturationKind, beta: f64) -> Result<Self> {
        Ok(Self { nu, kind, spec: QuantizerSpec::for_unit_energy(bits)?, gain: 1.0 / beta.sqrt() })
    }

    fn output(&self, v: Complex64) -> Complex64 {
        // finite by construction
        quantize(s1(v, self.nu, self.kind) * self.gain, &self.spec).unwrap_or_default()
    }
}

/// Independent Monte Carlo estimate of the [`rho_sq_numeric`] estimand.
///
/// Samples are split into 64 seeded streams, so the result is bit-identical
/// for a given seed regardless of thread count. The standard error comes
/// from the spread of the per-stream estimates.
pub fn rho_sq_monte_carlo(bits: u32, nu: f64, kind: SaturationKind, samples: u64, seed: u64) -> Result<RhoResult> {
    let mc = McSamples::new(bits, nu, kind, samples, seed)?;
    let sums = mc_pass(samples, seed, |rng, n| {
        let mut cross = Complex64::new(0.0, 0.0);
        let mut power = 0.0;
        for _ in 0..n {
            let v = draw(rng);
            let y = mc.output(v);
            cross += v.conj() * y;
            power += y.norm_sqr();
        }
        (cross, power, n as f64)
    });
    let ratio = |c: Complex64, p: f64, n: f64| (c / n).norm_sqr() / (p / n);
    let (cross, power, n) =
        sums.iter().fold((Complex64::new(0.0, 0.0), 0.0, 0.0), |acc, s| (acc.0 + s.0, acc.1 + s.1, acc.2 + s.2));
    let estimates: Vec<f64> = sums.iter().map(|s| ratio(s.0, s.1, s.2)).collect();
    Ok(RhoResult { rho_sq: ratio(cross, power, n), method: RhoMethod::MonteCarlo, stderr: std_error(&estimates) })
}

fn std_error(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (var / n).sqrt()
}

/// Monte Carlo check of the Bussgang decomposition `y = a v + d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BussgangResidual {
    /// Gain `a` from quadrature.
    pub gain: f64,
    /// Sample mean of `(y - a v) v*`.
    pub residual: Complex64,
    /// Standard error of `|residual|` from the per-stream means.
    pub stderr: f64,
}

/// Correlation between the Bussgang distortion and the input, estimated on
/// fresh samples. Both the ADC gain and `a` come from quadrature.
pub fn bussgang_residual(
    bits: u32,
    nu: f64,
    kind: SaturationKind,
    samples: u64,
    seed: u64,
) -> Result<BussgangResidual> {
    let gain = bussgang_gain(bits, nu, kind)?;
    if samples < MIN_MC_SAMPLES {
        return Err(invalid(format!("Monte Carlo needs >= {MIN_MC_SAMPLES} samples")));
    }
    let beta = if nu == f64::INFINITY { 1.0 } else { crate::radial::beta(nu, kind, &crate::radial::default_rule())? };
    let mc = McSamples::with_beta(bits, nu, kind, beta)?;
    let sums = mc_pass(samples, seed, |rng, n| {
        let mut acc = Complex64::new(0.0, 0.0);
        for _ in 0..n {
            let v = draw(rng);
            acc += (mc.output(v) - v * gain) * v.conj();
        }
        (acc, n as f64)
    });
    let (total, n) = sums.iter().fold((Complex64::new(0.0, 0.0), 0.0), |a, s| (a.0 + s.0, a.1 + s.1));
    let residual = total / n;
    let re: Vec<f64> = sums.iter().map(|s| s.0.re / s.1).collect();
    let im: Vec<f64> = sums.iter().map(|s| s.0.im / s.1).collect();
    let stderr = std_error(&re).hypot(std_error(&im));
    Ok(BussgangResidual { gain, residual, stderr })
}

/// `rho^2` of the quantizer alone, the `nu -> infinity` limit.
pub fn rho_sq_quant_only(bits: u32) -> Result<RhoResult> {
    check_bits(bits)?;
    if bits == 1 {
        return Ok(RhoResult::exact(FRAC_2_PI, RhoMethod::ClosedForm));
    }
    let (cross, power) = gaussian_quantizer_moments(quantizer_step(bits)?, bits);
    Ok(RhoResult::exact(cross * cross / power, RhoMethod::Quadrature))
}

/// `1 - 2^(-2b)`.
pub fn rho_sq_vector(bits: f64) -> Result<RhoResult> {
    if !(bits > 0.0) {
        return Err(invalid(format!("bits must be > 0, got {bits}")));
    }
    Ok(RhoResult::exact(1.0 - (-2.0 * bits).exp2(), RhoMethod::ClosedForm))
}

/// `1 - c b 2^(-2b)`.
pub fn rho_sq_asymptotic(bits: f64, c: f64) -> Result<RhoResult> {
    if !(bits > 0.0) || !(c > 0.0) {
        return Err(invalid(format!("need bits > 0 and c > 0, got b={bits}, c={c}")));
    }
    Ok(RhoResult::exact(1.0 - asymptotic_distortion(bits, c), RhoMethod::ClosedForm))
}

fn asymptotic_distortion(bits: f64, c: f64) -> f64 {
    c * bits * (-2.0 * bits).exp2()
}

pub const DEFAULT_CALIBRATION_BITS: [u32; 6] = [3, 4, 5, 6, 7, 8];

/// Least-squares `c` for `1 - rho^2 = c b 2^(-2b)` in the log domain.
pub fn calibrate_c(bits: &[u32]) -> Result<f64> {
    let mut distinct: Vec<u32> = bits.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(invalid("calibration needs at least two distinct resolutions"));
    }
    if distinct.iter().any(|b| !(3..=MAX_BITS).contains(b)) {
        return Err(invalid(format!("calibration resolutions must lie in 3..={MAX_BITS}")));
    }
    let mut acc = 0.0;
    for &b in &distinct {
        let rho = rho_sq_quant_only(b)?.rho_sq;
        acc += (1.0 - rho).ln() - asymptotic_distortion(b as f64, 1.0).ln();
    }
    let c = (acc / distinct.len() as f64).exp();
    if !(c > 0.0) || !c.is_finite() {
        return Err(invalid("calibration fit is singular"));
    }
    Ok(c)
}

/// `rho^2` under the chosen quantizer model at backoff `nu`.
///
/// Only the scalar uniform model depends on `nu` and `kind`.
pub fn rho_sq(model: &QuantizerModel, nu: f64, kind: SaturationKind) -> Result<RhoResult> {
    match *model {
        QuantizerModel::ScalarUniform { bits } => rho_sq_numeric(bits, nu, kind),
        QuantizerModel::OptimalVector { bits } => rho_sq_vector(bits),
        QuantizerModel::Asymptotic { bits, c } => rho_sq_asymptotic(bits, c),
        QuantizerModel::OneBit => Ok(RhoResult::exact(FRAC_2_PI, RhoMethod::ClosedForm)),
    }
}

/// `SNR rho^2 / (F + SNR (1 - rho^2))`.
pub fn sndr(op: &OperatingPoint, rho_sq: f64) -> f64 {
    sndr_linear(op.snr_ideal, op.noise_figure, rho_sq)
}

pub fn sndr_linear(snr_ideal: f64, noise_figure: f64, rho_sq: f64) -> f64 {
    if snr_ideal == 0.0 {
        return 0.0;
    }
    if snr_ideal == f64::INFINITY {
        return sdr_ceiling(rho_sq);
    }
    snr_ideal * rho_sq / (noise_figure + snr_ideal * (1.0 - rho_sq))
}

/// `rho^2 / (1 - rho^2)`, infinite at `rho^2 = 1`.
pub fn sdr_ceiling(rho_sq: f64) -> f64 {
    if rho_sq >= 1.0 {
        f64::INFINITY
    } else {
        rho_sq / (1.0 - rho_sq)
    }
}

/// SNDR with the asymptotic distortion model.
pub fn sndr_approx(bits: f64, snr_ideal: f64, noise_figure: f64, c: f64) -> f64 {
    let d = asymptotic_distortion(bits, c);
    (1.0 - d) * snr_ideal / (noise_figure + d * snr_ideal)
}

/// `log2(1 + SNDR)` in b/s/Hz.
pub fn spectral_efficiency(sndr: f64) -> f64 {
    sndr.ln_1p() / std::f64::consts::LN_2
}

/// `B log2(1 + SNR)` in b/s.
pub fn awgn_capacity(snr: f64, bandwidth: f64) -> f64 {
    bandwidth * spectral_efficiency(snr)
}

/// Capacity of the 1-bit I/Q channel, `2 (1 - H_b(Q(sqrt(SNR))))` b/s/Hz.
pub fn one_bit_capacity(snr: f64) -> f64 {
    if !(snr > 0.0) {
        return 0.0;
    }
    2.0 * (1.0 - binary_entropy(q_function(snr.sqrt())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{apply_rfe, gain_alpha, RfeKnobs};
    use crate::units::{db_to_lin, lin_to_db, KT_REF};
    use crate::RfeError;
    use proptest::prelude::*;

    const TANH: SaturationKind = SaturationKind::Tanh;
    const CLIP: SaturationKind = SaturationKind::Clip;

    #[test]
    fn quant_only_examples() {
        assert!((rho_sq_quant_only(1).unwrap().rho_sq - FRAC_2_PI).abs() < 1e-15);
        let sdr4 = lin_to_db(rho_sq_quant_only(4).unwrap().sdr());
        assert!((sdr4 - 19.33).abs() < 0.02, "{sdr4}");
        let mut prev = 0.0;
        for b in 1..=12 {
            let r = rho_sq_quant_only(b).unwrap().rho_sq;
            assert!(r > prev, "b={b}");
            prev = r;
        }
    }

    #[test]
    fn quant_only_matches_numeric_at_two_bits() {
        let a = rho_sq_quant_only(2).unwrap().rho_sq;
        let b = rho_sq_numeric(2, f64::INFINITY, TANH).unwrap().rho_sq;
        assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn numeric_converges_to_quant_only() {
        for b in 1..=12 {
            let q = rho_sq_quant_only(b).unwrap().rho_sq;
            let n = rho_sq_numeric(b, db_to_lin(60.0), TANH).unwrap().rho_sq;
            assert!((q - n).abs() < 1e-3, "b={b}: {q} vs {n}");
        }
        let q = rho_sq_quant_only(12).unwrap().rho_sq;
        let n = rho_sq_numeric(12, db_to_lin(60.0), TANH).unwrap().rho_sq;
        assert!((q - n).abs() < 1e-4);
    }

    #[test]
    fn one_bit_is_two_over_pi_at_any_backoff() {
        for nu_db in [-10.0, 0.0, 10.0, 60.0] {
            for kind in [TANH, CLIP] {
                let r = rho_sq_numeric(1, db_to_lin(nu_db), kind).unwrap().rho_sq;
                assert!((r - FRAC_2_PI).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn indoor_link_point() {
        let r = rho_sq_numeric(4, db_to_lin(30.0), TANH).unwrap();
        let sdr = lin_to_db(r.sdr());
        assert!((sdr - 20.0).abs() <= 1.0, "{sdr}");
        let s = lin_to_db(sndr_linear(db_to_lin(10.3), db_to_lin(4.0), r.rho_sq));
        assert!((s - 6.0).abs() <= 0.3, "{s}");
    }

    #[test]
    fn low_order_rule_reports_accuracy_error() {
        let err = rho_sq_numeric_with(6, 1.0, CLIP, &QuadratureConfig { nodes_per_panel: 1 }).unwrap_err();
        assert!(matches!(err, RfeError::Accuracy { .. }));
    }

    #[test]
    fn argument_errors() {
        assert!(rho_sq_numeric(0, 1.0, TANH).is_err());
        assert!(rho_sq_numeric(13, 1.0, TANH).is_err());
        assert!(rho_sq_numeric(3, 0.0, TANH).is_err());
        assert!(rho_sq_monte_carlo(3, 1.0, TANH, 100, 1).is_err());
        assert!(rho_sq_vector(0.0).is_err());
        assert!(calibrate_c(&[4]).is_err());
        assert!(calibrate_c(&[4, 4]).is_err());
        assert!(calibrate_c(&[2, 4]).is_err());
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = rho_sq_monte_carlo(3, 2.0, TANH, 20_000, 9).unwrap();
        let b = rho_sq_monte_carlo(3, 2.0, TANH, 20_000, 9).unwrap();
        assert_eq!(a.rho_sq.to_bits(), b.rho_sq.to_bits());
        assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        let c = rho_sq_monte_carlo(3, 2.0, TANH, 20_000, 10).unwrap();
        assert_ne!(a.rho_sq, c.rho_sq);
    }

    #[test]
    fn monte_carlo_one_bit() {
        let r = rho_sq_monte_carlo(1, db_to_lin(60.0), TANH, 400_000, 1).unwrap();
        assert!((r.rho_sq - FRAC_2_PI).abs() < 3.0 * r.stderr, "{r:?}");
    }

    #[test]
    fn quadrature_agrees_with_monte_carlo() {
        for (b, nu_db, kind) in [(2, 0.0, TANH), (4, 30.0, TANH), (3, 0.0, CLIP), (5, 10.0, CLIP)] {
            let nu = db_to_lin(nu_db);
            let q = rho_sq_numeric(b, nu, kind).unwrap().rho_sq;
            let m = rho_sq_monte_carlo(b, nu, kind, 400_000, 7).unwrap();
            assert!((q - m.rho_sq).abs() < 4.0 * m.stderr, "b={b} nu={nu_db} {kind:?}: {q} vs {m:?}");
        }
    }

    #[test]
    fn bussgang_orthogonality() {
        for (b, nu_db) in [(3, 0.0), (6, 20.0)] {
            let r = bussgang_residual(b, db_to_lin(nu_db), TANH, 400_000, 3).unwrap();
            assert!(r.residual.norm() < 3.0 * r.stderr, "{r:?}");
        }
    }

    #[test]
    fn vector_examples() {
        assert_eq!(rho_sq_vector(1.0).unwrap().rho_sq, 0.75);
        assert_eq!(rho_sq_vector(4.0).unwrap().rho_sq, 0.99609375);
        assert_eq!(rho_sq_vector(1e3).unwrap().rho_sq, 1.0);
        for b in 1..=12 {
            let v = rho_sq_vector(b as f64).unwrap().rho_sq;
            assert!(v >= rho_sq_quant_only(b).unwrap().rho_sq);
            assert!((sdr_ceiling(v) - ((4f64).powi(b as i32) - 1.0)).abs() < 1e-6 * 4f64.powi(b as i32));
        }
    }

    #[test]
    fn calibration() {
        let c = calibrate_c(&DEFAULT_CALIBRATION_BITS).unwrap();
        assert!(c > 0.0);
        let six = rho_sq_quant_only(6).unwrap().rho_sq;
        let fit = rho_sq_asymptotic(6.0, c).unwrap().rho_sq;
        assert!(((1.0 - fit) - (1.0 - six)).abs() < 0.1 * (1.0 - six));
        let c4 = calibrate_c(&[4, 5, 6, 7, 8]).unwrap();
        for b in 4..=12 {
            let a = lin_to_db(sdr_ceiling(rho_sq_asymptotic(b as f64, c).unwrap().rho_sq));
            let d = lin_to_db(sdr_ceiling(rho_sq_asymptotic(b as f64, c4).unwrap().rho_sq));
            assert!((a - d).abs() < 0.5);
        }
    }

    #[test]
    fn approx_tracks_uniform() {
        let c = calibrate_c(&DEFAULT_CALIBRATION_BITS).unwrap();
        let snr = db_to_lin(30.0);
        let f = db_to_lin(5.0);
        let mut prev = 0.0;
        for b in 3..=8 {
            let exact = sndr_linear(snr, f, rho_sq_quant_only(b).unwrap().rho_sq);
            let approx = sndr_approx(b as f64, snr, f, c);
            assert!((lin_to_db(exact) - lin_to_db(approx)).abs() < 0.5, "b={b}");
            assert!(approx > prev);
            prev = approx;
        }
        assert!((sndr_approx(60.0, snr, f, c) - snr / f).abs() < 1e-9 * snr);
    }

    #[test]
    fn sndr_examples() {
        assert!((sndr_linear(10.0, 2.0, 1.0) - 5.0).abs() < 1e-15);
        assert!((sndr_linear(1e15, 2.0, 0.75) - 3.0).abs() < 1e-9);
        assert_eq!(sndr_linear(f64::INFINITY, 2.0, 0.75), 3.0);
        assert_eq!(sndr_linear(0.0, 2.0, 0.75), 0.0);
        assert_eq!(sdr_ceiling(0.75), 3.0);
        assert_eq!(sdr_ceiling(0.5), 1.0);
        assert_eq!(sdr_ceiling(1.0), f64::INFINITY);
    }

    #[test]
    fn low_snr_product_form() {
        let snr = db_to_lin(-20.0);
        for b in 1..=8 {
            let r = rho_sq_quant_only(b).unwrap().rho_sq;
            let s = sndr_linear(snr, 2.0, r);
            assert!(((s - snr * r / 2.0) / s).abs() < 0.01);
        }
    }

    #[test]
    fn capacity_examples() {
        assert_eq!(spectral_efficiency(0.0), 0.0);
        assert!((spectral_efficiency(1.0) - 1.0).abs() < 1e-15);
        assert!((spectral_efficiency(3.0) - 2.0).abs() < 1e-15);
        assert!((awgn_capacity(1.0, 1.0) - 1.0).abs() < 1e-15);
        let r = awgn_capacity(db_to_lin(10.3), 200e6);
        assert!((r - 200e6 * (1.0 + db_to_lin(10.3)).log2()).abs() < 1.0);
        assert!((r / 707e6 - 1.0).abs() < 0.01, "{r}");
    }

    #[test]
    fn one_bit_capacity_examples() {
        assert_eq!(one_bit_capacity(0.0), 0.0);
        // independent route: entropy of the crossover probability from erfc
        let p = 0.5 * libm::erfc((db_to_lin(7.0) / 2.0).sqrt());
        let h = -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let want = 2.0 * (1.0 - h);
        assert!((one_bit_capacity(db_to_lin(7.0)) - want).abs() < 1e-12);
        assert!((want - 1.81).abs() < 0.02, "{want}");
        assert!((one_bit_capacity(db_to_lin(40.0)) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn operating_point_bookkeeping() {
        let op = OperatingPoint::new(10.0, 2.0, 5.0 * KT_REF, KT_REF).unwrap();
        assert!((op.n0 - 2.0 * KT_REF).abs() < 1e-30);
        assert!((op.e_r - op.snr_ideal * op.n0 / op.noise_figure).abs() < 1e-30);
        assert!((op.backoff - 5.0 / 12.0).abs() < 1e-14);
        assert!((op.e_max() - 5.0 * KT_REF).abs() < 1e-33);
        assert!(OperatingPoint::new(1.0, 1.0, 1.0, KT_REF).is_err());
    }

    /// SNDR measured on the full cascade with signal and noise drawn
    /// separately equals the closed-form combination of `rho^2`.
    #[test]
    fn cascade_sndr_matches_formula() {
        let kt = KT_REF;
        let snr = db_to_lin(10.0);
        let f = db_to_lin(4.0);
        let op = OperatingPoint::with_backoff(snr, f, db_to_lin(3.0), kt).unwrap();
        let knobs = RfeKnobs::new(f, op.e_max(), 3.0, TANH).unwrap();
        let spec = QuantizerSpec::for_unit_energy(3).unwrap();
        let alpha = gain_alpha(op.e_r, op.n0, &knobs).unwrap();
        let mut rng = batch_rng(11, 0);
        let n = 400_000;
        let (mut cross, mut py, mut pr) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        for _ in 0..n {
            let r = draw(&mut rng) * op.e_r.sqrt();
            let z = draw(&mut rng) * op.n0.sqrt();
            let y = apply_rfe(r, z, &knobs, &spec, alpha).unwrap();
            cross += r.conj() * y;
            py += y.norm_sqr();
            pr += r.norm_sqr();
        }
        let (cross, py, pr) = (cross / n as f64, py / n as f64, pr / n as f64);
        let measured = cross.norm_sqr() / (pr * py - cross.norm_sqr());
        let rho = rho_sq_numeric(3, op.backoff, TANH).unwrap().rho_sq;
        let want = sndr(&op, rho);
        assert!((lin_to_db(measured) - lin_to_db(want)).abs() < 0.05, "{measured} vs {want}");
    }

    proptest! {
        #[test]
        fn sndr_bounded(snr_db in -30.0f64..50.0, f_db in 0.1f64..15.0, rho in 0.0f64..1.0) {
            let snr = db_to_lin(snr_db);
            let f = db_to_lin(f_db);
            let s = sndr_linear(snr, f, rho);
            prop_assert!(s >= 0.0);
            prop_assert!(s <= (snr / f).min(sdr_ceiling(rho)) * (1.0 + 1e-12));
        }

        #[test]
        fn one_bit_capacity_monotone(a in 0.0f64..30.0, d in 1e-2f64..10.0) {
            let lo = one_bit_capacity(a);
            let hi = one_bit_capacity(a + d);
            prop_assert!(hi > lo);
            prop_assert!(hi <= 2.0);
        }
    }
}
