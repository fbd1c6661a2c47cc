//! Digital and analog beamforming.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::metrics::{rho_sq_numeric, sdr_ceiling, sndr_linear};
use crate::model::{RfeKnobs, SaturationKind};
use crate::power::{check_band, p_rfe, FiguresOfMerit, PowerBreakdown};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Architecture {
    /// One full front end per antenna, combined in baseband.
    #[default]
    Digital,
    /// Per-antenna LNA and phase shifter feeding a shared mixer and ADC.
    Analog,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArrayConfig {
    pub n: u32,
    pub architecture: Architecture,
    /// Linear extra LNA gain covering phase-shifter loss. Ignored for
    /// digital arrays.
    pub lna_extra_gain: f64,
}

pub const DEFAULT_LNA_EXTRA_GAIN: f64 = 10.0;

impl ArrayConfig {
    pub fn new(n: u32, architecture: Architecture, lna_extra_gain: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("array needs at least one antenna"));
        }
        if !(lna_extra_gain >= 1.0) || !lna_extra_gain.is_finite() {
            return Err(invalid(format!("LNA extra gain must be >= 1, got {lna_extra_gain}")));
        }
        Ok(Self { n, architecture, lna_extra_gain })
    }

    pub fn single() -> Self {
        Self { n: 1, architecture: Architecture::Digital, lna_extra_gain: 1.0 }
    }
}

pub fn digital_bf_sndr(single_sndr: f64, n: u32) -> f64 {
    n as f64 * single_sndr
}

pub fn digital_bf_sdr_ceiling(rho_sq: f64, n: u32) -> f64 {
    n as f64 * sdr_ceiling(rho_sq)
}

pub fn digital_bf_power(per_rfe: &PowerBreakdown, n: u32) -> PowerBreakdown {
    per_rfe.scaled(n as f64)
}

/// Backoff seen by the shared front end after coherent combining.
pub fn analog_bf_backoff(e_max: f64, e_r: f64, n0: f64, n: u32) -> f64 {
    e_max / (n as f64 * e_r + n0)
}

/// SNDR of an analog array with a shared scalar-uniform front end.
#[allow(clippy::too_many_arguments)]
pub fn analog_bf_sndr(
    snr_ideal: f64,
    noise_figure: f64,
    n: u32,
    bits: u32,
    e_max: f64,
    e_r: f64,
    n0: f64,
    kind: SaturationKind,
) -> Result<f64> {
    if n == 0 {
        return Err(invalid("array needs at least one antenna"));
    }
    let rho = rho_sq_numeric(bits, analog_bf_backoff(e_max, e_r, n0, n), kind)?.rho_sq;
    Ok(sndr_linear(n as f64 * snr_ideal, noise_figure, rho))
}

/// The analog ceiling does not grow with `n`.
pub fn analog_bf_sdr_ceiling(rho_sq: f64) -> f64 {
    sdr_ceiling(rho_sq)
}

/// `n` LNAs with extra gain `g`; one saturation stage and one ADC.
pub fn analog_bf_power(
    fc: f64,
    bandwidth: f64,
    knobs: &RfeKnobs,
    fom: &FiguresOfMerit,
    n: u32,
    g: f64,
) -> Result<PowerBreakdown> {
    check_band(fc, bandwidth)?;
    if n == 0 || !(g >= 1.0) {
        return Err(invalid(format!("need n >= 1 and G >= 1, got n={n}, G={g}")));
    }
    let single = p_rfe(fc, bandwidth, knobs, fom)?;
    Ok(PowerBreakdown::new(single.nf_term * n as f64 * g, single.sat_term, single.adc_term))
}

/// Power of an array front end under either architecture.
pub fn array_power(
    fc: f64,
    bandwidth: f64,
    knobs: &RfeKnobs,
    fom: &FiguresOfMerit,
    array: &ArrayConfig,
) -> Result<PowerBreakdown> {
    match array.architecture {
        Architecture::Digital => Ok(digital_bf_power(&p_rfe(fc, bandwidth, knobs, fom)?, array.n)),
        Architecture::Analog => analog_bf_power(fc, bandwidth, knobs, fom, array.n, array.lna_extra_gain),
    }
}
