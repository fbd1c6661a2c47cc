//! Front-end power consumption and energy per bit.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result, RfeError};
use crate::model::{RfeKnobs, SaturationKind};

/// Proportionality constants of the power model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiguresOfMerit {
    /// Joules per quantization step.
    pub gamma_adc: f64,
    /// Joules; scales `fc / (F - 1)`.
    pub gamma_nf: f64,
    /// Dimensionless; scales the saturation power.
    pub gamma_max: f64,
}

impl Default for FiguresOfMerit {
    fn default() -> Self {
        Self { gamma_adc: 165e-15, gamma_nf: 140e-15, gamma_max: 5000.0 }
    }
}

impl FiguresOfMerit {
    pub fn new(gamma_adc: f64, gamma_nf: f64, gamma_max: f64) -> Result<Self> {
        let fom = Self { gamma_adc, gamma_nf, gamma_max };
        fom.validate()?;
        Ok(fom)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("gamma_adc", self.gamma_adc), ("gamma_nf", self.gamma_nf), ("gamma_max", self.gamma_max)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// Power per block, in Watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerBreakdown {
    pub nf_term: f64,
    pub sat_term: f64,
    pub adc_term: f64,
    pub total: f64,
}

impl PowerBreakdown {
    pub fn new(nf_term: f64, sat_term: f64, adc_term: f64) -> Self {
        Self { nf_term, sat_term, adc_term, total: nf_term + sat_term + adc_term }
    }

    /// Every term multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.nf_term * factor, self.sat_term * factor, self.adc_term * factor)
    }
}

pub(crate) fn check_band(fc: f64, bandwidth: f64) -> Result<()> {
    if !(fc > 0.0) || !fc.is_finite() || !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(invalid(format!("carrier and bandwidth must be finite and > 0, got fc={fc}, B={bandwidth}")));
    }
    Ok(())
}

fn check_knobs(knobs: &RfeKnobs) -> Result<()> {
    if !(knobs.noise_figure > 1.0) {
        return Err(invalid(format!("noise figure must be > 1, got {}", knobs.noise_figure)));
    }
    if !knobs.e_max.is_finite() || !(knobs.e_max > 0.0) {
        return Err(invalid("power model needs a finite saturation energy"));
    }
    if !(knobs.bits > 0.0) {
        return Err(invalid(format!("bits must be > 0, got {}", knobs.bits)));
    }
    Ok(())
}

/// `gamma_nf fc / (F - 1) + gamma_max e_max B + gamma_adc B 2^b`.
pub fn p_rfe(fc: f64, bandwidth: f64, knobs: &RfeKnobs, fom: &FiguresOfMerit) -> Result<PowerBreakdown> {
    check_band(fc, bandwidth)?;
    check_knobs(knobs)?;
    fom.validate()?;
    Ok(PowerBreakdown::new(
        fom.gamma_nf * fc / (knobs.noise_figure - 1.0),
        fom.gamma_max * knobs.e_max * bandwidth,
        fom.gamma_adc * bandwidth * knobs.bits.exp2(),
    ))
}

/// Energy per bit; infinite with `zero_rate` set when the spectral
/// efficiency is zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPerBit {
    pub joules: f64,
    pub zero_rate: bool,
}

impl EnergyPerBit {
    fn from_energy(per_symbol: f64, se: f64) -> Result<Self> {
        if !(se >= 0.0) || !se.is_finite() {
            return Err(invalid(format!("spectral efficiency must be finite and >= 0, got {se}")));
        }
        if se == 0.0 {
            return Ok(Self { joules: f64::INFINITY, zero_rate: true });
        }
        Ok(Self { joules: per_symbol / se, zero_rate: false })
    }
}

/// `(gamma_nf (fc/B) / (F - 1) + gamma_max e_max + gamma_adc 2^b) / C`.
///
/// With `neglect_sat` the middle term is dropped and the result depends on
/// `fc` and `B` only through their ratio.
pub fn energy_per_bit(
    fc: f64,
    bandwidth: f64,
    knobs: &RfeKnobs,
    fom: &FiguresOfMerit,
    se: f64,
    neglect_sat: bool,
) -> Result<EnergyPerBit> {
    check_band(fc, bandwidth)?;
    fom.validate()?;
    let sat = if neglect_sat {
        if !(knobs.noise_figure > 1.0) || !(knobs.bits > 0.0) {
            return Err(invalid("noise figure must be > 1 and bits > 0"));
        }
        0.0
    } else {
        check_knobs(knobs)?;
        fom.gamma_max * knobs.e_max
    };
    let nf = fom.gamma_nf * (fc / bandwidth) / (knobs.noise_figure - 1.0);
    let adc = fom.gamma_adc * knobs.bits.exp2();
    EnergyPerBit::from_energy(nf + sat + adc, se)
}

/// 1-bit receiver energy per bit; no saturation term.
pub fn one_bit_energy_per_bit(
    fc: f64,
    bandwidth: f64,
    noise_figure: f64,
    fom: &FiguresOfMerit,
    se: f64,
) -> Result<EnergyPerBit> {
    if se > 2.0 {
        return Err(invalid(format!("1-bit spectral efficiency cannot exceed 2, got {se}")));
    }
    let knobs = RfeKnobs::new(noise_figure, f64::INFINITY, 1.0, SaturationKind::Tanh)?;
    energy_per_bit(fc, bandwidth, &knobs, fom, se, true)
}

/// `P_max = 1.5 IIP3` for the tanh characteristic.
pub fn pmax_from_iip3(iip3: f64, kind: SaturationKind) -> Result<f64> {
    if kind == SaturationKind::Clip {
        return Err(RfeError::Unsupported("clipping has no third-order term, IIP3 is undefined".into()));
    }
    if !(iip3 > 0.0) || !iip3.is_finite() {
        return Err(invalid(format!("IIP3 must be finite and > 0, got {iip3}")));
    }
    Ok(1.5 * iip3)
}

/// Inverse of [`pmax_from_iip3`].
pub fn iip3_from_pmax(pmax: f64, kind: SaturationKind) -> Result<f64> {
    Ok(pmax * pmax / pmax_from_iip3(pmax, kind)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{db_to_lin, dbm_to_watts, watts_to_dbm};
    use proptest::prelude::*;

    fn knobs(f_db: f64, e_max: f64, bits: f64) -> RfeKnobs {
        RfeKnobs::new(db_to_lin(f_db), e_max, bits, SaturationKind::Tanh).unwrap()
    }

    #[test]
    fn indoor_link_terms() {
        let p = p_rfe(3.5e9, 200e6, &knobs(4.0, 1e-18, 4.0), &FiguresOfMerit::default()).unwrap();
        assert!((p.nf_term - 0.32e-3).abs() < 0.02 * 0.32e-3, "{}", p.nf_term);
        assert!((p.adc_term - 0.528e-3).abs() < 1e-12);
        assert_eq!(p.total, p.nf_term + p.sat_term + p.adc_term);
    }

    #[test]
    fn adc_doubles_per_bit() {
        let fom = FiguresOfMerit::default();
        for b in 1..12 {
            let lo = p_rfe(1e9, 1e8, &knobs(3.0, 1e-18, b as f64), &fom).unwrap();
            let hi = p_rfe(1e9, 1e8, &knobs(3.0, 1e-18, b as f64 + 1.0), &fom).unwrap();
            assert_eq!(hi.adc_term, 2.0 * lo.adc_term);
        }
    }

    #[test]
    fn invalid_inputs() {
        let fom = FiguresOfMerit::default();
        let mut k = knobs(3.0, 1e-18, 4.0);
        k.noise_figure = 1.0;
        assert!(p_rfe(1e9, 1e8, &k, &fom).is_err());
        assert!(p_rfe(0.0, 1e8, &knobs(3.0, 1e-18, 4.0), &fom).is_err());
        let unbounded = knobs(3.0, f64::INFINITY, 4.0);
        assert!(p_rfe(1e9, 1e8, &unbounded, &fom).is_err());
        assert!(energy_per_bit(1e9, 1e8, &unbounded, &fom, 1.0, true).is_ok());
        assert!(FiguresOfMerit::new(0.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn indoor_link_energy_per_bit() {
        // 0.84 mW at 160 Mbps, the ratio of the two reported quantities
        let eb: f64 = 0.84e-3 / 160e6;
        assert!((eb - 5.25e-12).abs() < 1e-15);
        let fom = FiguresOfMerit::default();
        let k = knobs(4.0, 1e-18, 4.0);
        let p = p_rfe(3.5e9, 200e6, &k, &fom).unwrap();
        let se = 0.8;
        let e = energy_per_bit(3.5e9, 200e6, &k, &fom, se, false).unwrap();
        assert!(!e.zero_rate);
        assert!((e.joules * se * 200e6 / p.total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn energy_scaling() {
        let fom = FiguresOfMerit::default();
        let k = knobs(5.0, 1e-18, 6.0);
        let a = energy_per_bit(7e9, 1e8, &k, &fom, 2.0, true).unwrap().joules;
        let b = energy_per_bit(7e10, 1e9, &k, &fom, 2.0, true).unwrap().joules;
        assert!((a - b).abs() < 1e-12 * a);
        let half = energy_per_bit(7e9, 1e8, &k, &fom, 4.0, true).unwrap().joules;
        assert!((half - a / 2.0).abs() < 1e-12 * a);
        let zero = energy_per_bit(7e9, 1e8, &k, &fom, 0.0, true).unwrap();
        assert!(zero.zero_rate && zero.joules == f64::INFINITY);
    }

    #[test]
    fn one_bit_energy() {
        let fom = FiguresOfMerit::default();
        let at = |f_db: f64| one_bit_energy_per_bit(70.0, 1.0, db_to_lin(f_db), &fom, 2.0).unwrap().joules;
        assert!(at(10.0) > 0.0);
        assert!(at(13.0) < at(10.0));
        let k = knobs(10.0, 1.0, 1.0);
        let general = energy_per_bit(70.0, 1.0, &k, &fom, 1.5, true).unwrap().joules;
        let special = one_bit_energy_per_bit(70.0, 1.0, db_to_lin(10.0), &fom, 1.5).unwrap().joules;
        assert_eq!(general, special);
        assert!(one_bit_energy_per_bit(70.0, 1.0, 10.0, &fom, 0.0).unwrap().zero_rate);
        assert!(one_bit_energy_per_bit(70.0, 1.0, 10.0, &fom, 2.5).is_err());
    }

    #[test]
    fn iip3_conversion() {
        assert!((pmax_from_iip3(2e-3, SaturationKind::Tanh).unwrap() - 3e-3).abs() < 1e-18);
        let p = watts_to_dbm(pmax_from_iip3(dbm_to_watts(0.0), SaturationKind::Tanh).unwrap());
        assert!((p - 1.7609).abs() < 1e-4);
        let back = iip3_from_pmax(pmax_from_iip3(0.7, SaturationKind::Tanh).unwrap(), SaturationKind::Tanh).unwrap();
        assert!((back - 0.7).abs() < 1e-15);
        assert!(matches!(pmax_from_iip3(1.0, SaturationKind::Clip), Err(RfeError::Unsupported(_))));
    }

    proptest! {
        #[test]
        fn monotone_in_each_knob(f_db in 0.2f64..15.0, e in 1e-21f64..1e-15, b in 1.0f64..12.0, bw in 1e6f64..1e9) {
            let fom = FiguresOfMerit::default();
            let base = p_rfe(28e9, bw, &knobs(f_db, e, b), &fom).unwrap().total;
            prop_assert!(p_rfe(28e9, bw, &knobs(f_db + 0.1, e, b), &fom).unwrap().total < base);
            prop_assert!(p_rfe(28e9, bw, &knobs(f_db, e * 1.1, b), &fom).unwrap().total > base);
            prop_assert!(p_rfe(28e9, bw, &knobs(f_db, e, b + 0.5), &fom).unwrap().total > base);
            prop_assert!(p_rfe(28e9, bw * 1.1, &knobs(f_db, e, b), &fom).unwrap().total > base);
            prop_assert!(p_rfe(29e9, bw, &knobs(f_db, e, b), &fom).unwrap().total > base);
        }

        #[test]
        fn energy_times_rate_is_power(f_db in 0.2f64..15.0, b in 1.0f64..12.0, se in 0.01f64..20.0) {
            let fom = FiguresOfMerit::default();
            let k = knobs(f_db, 1e-18, b);
            let p = p_rfe(3.5e9, 2e8, &k, &fom).unwrap().total;
            let e = energy_per_bit(3.5e9, 2e8, &k, &fom, se, false).unwrap().joules;
            prop_assert!((e * se * 2e8 / p - 1.0).abs() < 1e-12);
        }
    }
}
