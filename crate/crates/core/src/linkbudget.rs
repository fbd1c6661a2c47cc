//! Link budget: from transmit power and geometry to SNR, rate and power.

use serde::{Deserialize, Serialize};

use crate::array::{array_power, Architecture, ArrayConfig};
use crate::error::{invalid, Result};
use crate::metrics::{rho_sq_numeric, sdr_ceiling, sndr_linear, spectral_efficiency};
use crate::model::{RfeKnobs, SaturationKind};
use crate::power::{FiguresOfMerit, PowerBreakdown};
use crate::units::{kt, lin_to_db};

/// Indoor-hotspot pathloss models, shadow fading excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathlossModel {
    InhNlos,
    InhLos,
    FixedDb(f64),
}

const FC_RANGE_GHZ: (f64, f64) = (0.5, 100.0);

pub fn pathloss_db(model: PathlossModel, fc: f64, distance: f64) -> Result<f64> {
    if !(distance >= 1.0) || !distance.is_finite() {
        return Err(invalid(format!("distance must be >= 1 m, got {distance}")));
    }
    let ghz = fc / 1e9;
    let in_range = (FC_RANGE_GHZ.0..=FC_RANGE_GHZ.1).contains(&ghz);
    match model {
        PathlossModel::FixedDb(db) if db.is_finite() => Ok(db),
        PathlossModel::FixedDb(db) => Err(invalid(format!("fixed pathloss must be finite, got {db}"))),
        _ if !in_range => Err(invalid(format!("carrier {ghz} GHz outside {}..{} GHz", FC_RANGE_GHZ.0, FC_RANGE_GHZ.1))),
        PathlossModel::InhNlos => Ok(17.3 + 38.3 * distance.log10() + 24.9 * ghz.log10()),
        PathlossModel::InhLos => Ok(32.4 + 17.3 * distance.log10() + 20.0 * ghz.log10()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkScenario {
    /// Watts.
    pub tx_power: f64,
    /// Hz.
    pub fc: f64,
    /// Hz.
    pub bandwidth: f64,
    /// Meters.
    pub distance: f64,
    pub pathloss: PathlossModel,
    /// Kelvin.
    pub temperature: f64,
    /// Fraction of the derated capacity actually delivered.
    pub rate_derating: f64,
    /// SNDR penalty inside the rate formula.
    pub sndr_derating: f64,
}

impl LinkScenario {
    pub fn new(tx_power: f64, fc: f64, bandwidth: f64, distance: f64, pathloss: PathlossModel) -> Self {
        Self {
            tx_power,
            fc,
            bandwidth,
            distance,
            pathloss,
            temperature: 290.0,
            rate_derating: 0.8,
            sndr_derating: 0.25,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tx_power", self.tx_power),
            ("fc", self.fc),
            ("bandwidth", self.bandwidth),
            ("distance", self.distance),
            ("temperature", self.temperature),
            ("sndr_derating", self.sndr_derating),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(invalid(format!("{name} must be finite and > 0, got {v}")));
            }
        }
        if !(self.rate_derating > 0.0 && self.rate_derating <= 1.0) {
            return Err(invalid(format!("rate derating must be in (0, 1], got {}", self.rate_derating)));
        }
        Ok(())
    }

    pub fn kt(&self) -> f64 {
        kt(self.temperature)
    }

    /// Received energy per symbol in Joules.
    pub fn e_r(&self) -> Result<f64> {
        Ok(snr_ideal_from_link(self)? * self.kt())
    }

    /// Knobs with the saturation level `backoff` above the single-antenna
    /// input energy.
    pub fn knobs_at_backoff(
        &self,
        noise_figure: f64,
        backoff: f64,
        bits: u32,
        kind: SaturationKind,
    ) -> Result<RfeKnobs> {
        RfeKnobs::from_backoff(noise_figure, backoff, bits as f64, kind, self.e_r()?, self.kt() * noise_figure)
    }
}

/// Received power over `kT B`.
pub fn snr_ideal_from_link(s: &LinkScenario) -> Result<f64> {
    s.validate()?;
    let pl = pathloss_db(s.pathloss, s.fc, s.distance)?;
    let received = s.tx_power * 10f64.powf(-pl / 10.0);
    Ok(received / (s.kt() * s.bandwidth))
}

/// Every intermediate of a scenario evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub pathloss_db: f64,
    pub snr_ideal: f64,
    pub snr_ideal_db: f64,
    pub kt: f64,
    pub e_r: f64,
    pub n0: f64,
    pub knobs: RfeKnobs,
    pub array: ArrayConfig,
    /// Backoff at the saturation stage.
    pub backoff: f64,
    pub backoff_db: f64,
    pub rho_sq: f64,
    pub sdr_db: f64,
    pub sndr: f64,
    pub sndr_db: f64,
    /// `snr_ideal_db - sndr_db`.
    pub gap_db: f64,
    pub spectral_efficiency: f64,
    /// Derated bit rate in b/s.
    pub rate_bps: f64,
    pub breakdown: PowerBreakdown,
    /// Joules per delivered bit.
    pub energy_per_bit: f64,
}

pub fn evaluate_scenario(s: &LinkScenario, knobs: &RfeKnobs, fom: &FiguresOfMerit) -> Result<ScenarioReport> {
    evaluate_array_scenario(s, knobs, fom, &ArrayConfig::single())
}

pub fn evaluate_array_scenario(
    s: &LinkScenario,
    knobs: &RfeKnobs,
    fom: &FiguresOfMerit,
    array: &ArrayConfig,
) -> Result<ScenarioReport> {
    let snr_ideal = snr_ideal_from_link(s)?;
    let pathloss_db = pathloss_db(s.pathloss, s.fc, s.distance)?;
    let kt = s.kt();
    let e_r = snr_ideal * kt;
    let n0 = kt * knobs.noise_figure;
    let bits = knobs.integer_bits()?;
    let n = array.n as f64;
    let (backoff, effective_snr) = match array.architecture {
        Architecture::Digital => (knobs.e_max / (e_r + n0), snr_ideal),
        Architecture::Analog => (knobs.e_max / (n * e_r + n0), n * snr_ideal),
    };
    let rho_sq = rho_sq_numeric(bits, backoff, knobs.sat_kind)?.rho_sq;
    let mut sndr = sndr_linear(effective_snr, knobs.noise_figure, rho_sq);
    if array.architecture == Architecture::Digital {
        sndr *= n;
    }
    let breakdown = array_power(s.fc, s.bandwidth, knobs, fom, array)?;
    let rate_bps = s.rate_derating * s.bandwidth * spectral_efficiency(s.sndr_derating * sndr);
    Ok(ScenarioReport {
        pathloss_db,
        snr_ideal,
        snr_ideal_db: lin_to_db(snr_ideal),
        kt,
        e_r,
        n0,
        knobs: *knobs,
        array: *array,
        backoff,
        backoff_db: lin_to_db(backoff),
        rho_sq,
        sdr_db: lin_to_db(sdr_ceiling(rho_sq)),
        sndr,
        sndr_db: lin_to_db(sndr),
        gap_db: lin_to_db(snr_ideal) - lin_to_db(sndr),
        spectral_efficiency: spectral_efficiency(sndr),
        rate_bps,
        breakdown,
        energy_per_bit: if rate_bps > 0.0 { breakdown.total / rate_bps } else { f64::INFINITY },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::p_rfe;
    use crate::units::{db_to_lin, dbm_to_watts};

    fn indoor_link() -> LinkScenario {
        LinkScenario::new(1e-3, 3.5e9, 200e6, 20.0, PathlossModel::InhNlos)
    }

    fn indoor_link_knobs(s: &LinkScenario) -> RfeKnobs {
        s.knobs_at_backoff(db_to_lin(4.0), db_to_lin(30.0), 4, SaturationKind::Tanh).unwrap()
    }

    #[test]
    fn pathloss_examples() {
        let pl = pathloss_db(PathlossModel::InhNlos, 3.5e9, 20.0).unwrap();
        assert!((pl - 80.68).abs() < 0.01, "{pl}");
        assert_eq!(pathloss_db(PathlossModel::FixedDb(93.5), 1.0, 7.0).unwrap(), 93.5);
        assert!(pathloss_db(PathlossModel::InhNlos, 3.5e9, 0.5).is_err());
        assert!(pathloss_db(PathlossModel::InhLos, 200e9, 5.0).is_err());
        let mut prev = 0.0;
        for d in [1.0, 2.0, 10.0, 50.0] {
            let pl = pathloss_db(PathlossModel::InhNlos, 3.5e9, d).unwrap();
            assert!(pl > prev);
            prev = pl;
        }
        assert!(
            pathloss_db(PathlossModel::InhNlos, 28e9, 5.0).unwrap()
                > pathloss_db(PathlossModel::InhNlos, 3.5e9, 5.0).unwrap()
        );
    }

    #[test]
    fn snr_scaling() {
        let s = indoor_link();
        let base = lin_to_db(snr_ideal_from_link(&s).unwrap());
        assert!((base - 10.3).abs() <= 0.2, "{base}");
        let louder = LinkScenario { tx_power: 1e-2, ..s };
        assert!((lin_to_db(snr_ideal_from_link(&louder).unwrap()) - base - 10.0).abs() < 1e-9);
        let wider = LinkScenario { bandwidth: 2e9, ..s };
        assert!((lin_to_db(snr_ideal_from_link(&wider).unwrap()) - base + 10.0).abs() < 1e-9);
        let los = LinkScenario { pathloss: PathlossModel::InhLos, ..s };
        assert!((lin_to_db(snr_ideal_from_link(&los).unwrap()) - 25.0).abs() < 1.0);
    }

    #[test]
    fn indoor_link_pipeline() {
        let s = indoor_link();
        let r = evaluate_scenario(&s, &indoor_link_knobs(&s), &FiguresOfMerit::default()).unwrap();
        assert!((r.sndr_db - 6.0).abs() <= 0.3, "{}", r.sndr_db);
        assert!((r.rate_bps - 160e6).abs() <= 5e6, "{}", r.rate_bps);
        assert!(r.breakdown.adc_term >= 0.52e-3 && r.breakdown.adc_term <= 0.53e-3);
        assert!((r.breakdown.nf_term / 0.32e-3 - 1.0).abs() <= 0.05);
        assert!(r.breakdown.total < 1e-3);
        assert!((r.gap_db - 4.3).abs() <= 0.5);
        assert!((r.backoff_db - 30.0).abs() < 1e-9);
    }

    #[test]
    fn derating_off_gives_capacity() {
        let s = LinkScenario { rate_derating: 1.0, sndr_derating: 1.0, ..indoor_link() };
        let r = evaluate_scenario(&s, &indoor_link_knobs(&s), &FiguresOfMerit::default()).unwrap();
        assert!((r.rate_bps - s.bandwidth * spectral_efficiency(r.sndr)).abs() < 1e-6);
    }

    #[test]
    fn report_recomputes() {
        let s = LinkScenario { distance: 7.0, ..indoor_link() };
        let knobs = s.knobs_at_backoff(db_to_lin(3.0), db_to_lin(8.0), 5, SaturationKind::Clip).unwrap();
        let fom = FiguresOfMerit::default();
        let r = evaluate_scenario(&s, &knobs, &fom).unwrap();
        let rho = rho_sq_numeric(5, r.backoff, SaturationKind::Clip).unwrap().rho_sq;
        let sndr = sndr_linear(r.snr_ideal, knobs.noise_figure, rho);
        let power = p_rfe(s.fc, s.bandwidth, &knobs, &fom).unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs());
        assert!(close(r.sndr, sndr));
        assert!(close(r.breakdown.total, power.total));
        assert!(close(r.energy_per_bit, power.total / r.rate_bps));
        assert!(close(r.backoff, db_to_lin(8.0)));
        assert!(r.sndr <= r.snr_ideal / knobs.noise_figure);
    }

    #[test]
    fn invalid_scenarios() {
        let bad = LinkScenario { rate_derating: 1.5, ..indoor_link() };
        assert!(snr_ideal_from_link(&bad).is_err());
        let bad = LinkScenario { tx_power: dbm_to_watts(f64::NEG_INFINITY), ..indoor_link() };
        assert!(snr_ideal_from_link(&bad).is_err());
        let s = indoor_link();
        let mut k = indoor_link_knobs(&s);
        k.bits = 4.5;
        assert!(evaluate_scenario(&s, &k, &FiguresOfMerit::default()).is_err());
    }

    #[test]
    fn arrays_in_scenarios() {
        let s = indoor_link();
        let k = indoor_link_knobs(&s);
        let fom = FiguresOfMerit::default();
        let one = evaluate_scenario(&s, &k, &fom).unwrap();
        let dig = ArrayConfig::new(4, Architecture::Digital, 10.0).unwrap();
        let r = evaluate_array_scenario(&s, &k, &fom, &dig).unwrap();
        assert!((r.sndr - 4.0 * one.sndr).abs() < 1e-12 * r.sndr);
        assert!((r.breakdown.total - 4.0 * one.breakdown.total).abs() < 1e-15);
        let ana = ArrayConfig::new(4, Architecture::Analog, 10.0).unwrap();
        let r = evaluate_array_scenario(&s, &k, &fom, &ana).unwrap();
        assert!(r.backoff < one.backoff);
        assert_eq!(r.breakdown.adc_term, one.breakdown.adc_term);
    }
}
