//! JSON configuration files.
//!
//! Units in key names are explicit (`_db`, `_dbm`, `_ghz`, `_mhz`, `_fj`);
//! everything is converted to linear SI on the way in. Unknown keys are
//! rejected.

use serde::{Deserialize, Serialize};

use crate::array::{Architecture, ArrayConfig, DEFAULT_LNA_EXTRA_GAIN};
use crate::error::{Result, RfeError};
use crate::linkbudget::{LinkScenario, PathlossModel};
use crate::model::{RfeKnobs, SaturationKind, MAX_BITS};
use crate::optimizer::{stepped, BitSearch, ContinuousModel, KnobGrid, SearchContext};
use crate::power::FiguresOfMerit;
use crate::units::{db_to_lin, dbm_to_watts, kt};

/// Longest axis a range may expand to.
pub const MAX_AXIS_LEN: usize = 10_000;

fn config_err(msg: impl Into<String>) -> RfeError {
    RfeError::Config(msg.into())
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
}

fn finite(name: &str, v: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(config_err(format!("{name} must be finite")))
    }
}

fn positive(name: &str, v: f64) -> Result<f64> {
    if finite(name, v)? > 0.0 {
        Ok(v)
    } else {
        Err(config_err(format!("{name} must be > 0, got {v}")))
    }
}

fn check_bits(name: &str, b: u32) -> Result<u32> {
    if (1..=MAX_BITS).contains(&b) {
        Ok(b)
    } else {
        Err(config_err(format!("{name} must be in 1..={MAX_BITS}, got {b}")))
    }
}

/// A list of values or an inclusive `start..stop` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisSpec {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl AxisSpec {
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        let out = match *self {
            Self::List(ref xs) => xs.clone(),
            Self::Range { start, stop, step } => {
                finite(name, start)?;
                finite(name, stop)?;
                positive(&format!("{name}.step"), step)?;
                if stop < start {
                    return Err(config_err(format!("{name}: stop below start")));
                }
                let count = (stop - start) / step + 1.0;
                if count > MAX_AXIS_LEN as f64 {
                    return Err(config_err(format!("{name}: more than {MAX_AXIS_LEN} points")));
                }
                stepped(start, stop, step)
            }
        };
        if out.is_empty() || out.len() > MAX_AXIS_LEN {
            return Err(config_err(format!("{name} must have 1..={MAX_AXIS_LEN} values")));
        }
        for v in &out {
            finite(name, *v)?;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FomSection {
    #[serde(default = "default_gamma_adc_fj")]
    pub gamma_adc_fj: f64,
    #[serde(default = "default_gamma_nf_fj")]
    pub gamma_nf_fj: f64,
    #[serde(default = "default_gamma_max")]
    pub gamma_max: f64,
}

fn default_gamma_adc_fj() -> f64 {
    FiguresOfMerit::default().gamma_adc * 1e15
}

fn default_gamma_nf_fj() -> f64 {
    FiguresOfMerit::default().gamma_nf * 1e15
}

fn default_gamma_max() -> f64 {
    FiguresOfMerit::default().gamma_max
}

impl Default for FomSection {
    fn default() -> Self {
        Self {
            gamma_adc_fj: default_gamma_adc_fj(),
            gamma_nf_fj: default_gamma_nf_fj(),
            gamma_max: default_gamma_max(),
        }
    }
}

impl FomSection {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Self = parse_json(text)?;
        s.to_fom()?;
        Ok(s)
    }

    pub fn to_fom(&self) -> Result<FiguresOfMerit> {
        FiguresOfMerit::new(self.gamma_adc_fj * 1e-15, self.gamma_nf_fj * 1e-15, self.gamma_max)
            .map_err(|e| config_err(format!("fom: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArraySection {
    pub n: u32,
    #[serde(default)]
    pub architecture: Architecture,
    #[serde(default = "default_lna_gain_db")]
    pub lna_extra_gain_db: f64,
}

fn default_lna_gain_db() -> f64 {
    10.0 * DEFAULT_LNA_EXTRA_GAIN.log10()
}

impl ArraySection {
    pub fn to_array(&self) -> Result<ArrayConfig> {
        ArrayConfig::new(self.n, self.architecture, db_to_lin(finite("lna_extra_gain_db", self.lna_extra_gain_db)?))
            .map_err(|e| config_err(format!("array: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSection {
    pub tx_power_dbm: f64,
    pub fc_ghz: f64,
    pub bw_mhz: f64,
    pub distance_m: f64,
    #[serde(default = "default_pathloss")]
    pub pathloss: PathlossModel,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
}

fn default_pathloss() -> PathlossModel {
    PathlossModel::InhNlos
}

fn default_temperature() -> f64 {
    290.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnobSection {
    pub nf_db: f64,
    pub bits: u32,
    pub backoff_db: f64,
    #[serde(default)]
    pub sat: SaturationKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeratingSection {
    #[serde(default = "default_rate_derating")]
    pub rate: f64,
    #[serde(default = "default_sndr_derating")]
    pub sndr: f64,
}

fn default_rate_derating() -> f64 {
    0.8
}

fn default_sndr_derating() -> f64 {
    0.25
}

impl Default for DeratingSection {
    fn default() -> Self {
        Self { rate: default_rate_derating(), sndr: default_sndr_derating() }
    }
}

/// Single-link scenario file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub link: LinkSection,
    pub knobs: KnobSection,
    #[serde(default)]
    pub fom: Option<FomSection>,
    #[serde(default)]
    pub array: Option<ArraySection>,
    #[serde(default)]
    pub derating: Option<DeratingSection>,
}

impl ScenarioConfig {
    /// Parses and validates every section.
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_json(text)?;
        cfg.scenario()?;
        cfg.knob_values()?;
        cfg.fom()?;
        cfg.array()?;
        Ok(cfg)
    }

    pub fn scenario(&self) -> Result<LinkScenario> {
        let l = &self.link;
        let d = self.derating.unwrap_or_default();
        let s = LinkScenario {
            tx_power: dbm_to_watts(finite("tx_power_dbm", l.tx_power_dbm)?),
            fc: positive("fc_ghz", l.fc_ghz)? * 1e9,
            bandwidth: positive("bw_mhz", l.bw_mhz)? * 1e6,
            distance: positive("distance_m", l.distance_m)?,
            pathloss: l.pathloss,
            temperature: positive("temperature_k", l.temperature_k)?,
            rate_derating: d.rate,
            sndr_derating: d.sndr,
        };
        s.validate().map_err(|e| config_err(format!("link: {e}")))?;
        if let PathlossModel::FixedDb(db) = s.pathloss {
            finite("pathloss.fixed_db", db)?;
        }
        Ok(s)
    }

    /// `(F, backoff, bits, kind)` in linear units.
    pub fn knob_values(&self) -> Result<(f64, f64, u32, SaturationKind)> {
        let k = &self.knobs;
        let f = positive("nf_db", k.nf_db)?;
        let nu = finite("backoff_db", k.backoff_db)?;
        Ok((db_to_lin(f), db_to_lin(nu), check_bits("bits", k.bits)?, k.sat))
    }

    /// Knobs with `e_max` resolved against the link's input energy.
    pub fn knobs(&self) -> Result<RfeKnobs> {
        let (f, nu, bits, kind) = self.knob_values()?;
        let s = self.scenario()?;
        let array = self.array()?;
        let e_r = s.e_r().map_err(|e| config_err(e.to_string()))?;
        let n0 = s.kt() * f;
        let signal = match array.architecture {
            Architecture::Digital => e_r,
            Architecture::Analog => array.n as f64 * e_r,
        };
        RfeKnobs::from_backoff(f, nu, bits as f64, kind, signal, n0).map_err(|e| config_err(e.to_string()))
    }

    pub fn fom(&self) -> Result<FiguresOfMerit> {
        self.fom.unwrap_or_default().to_fom()
    }

    pub fn array(&self) -> Result<ArrayConfig> {
        match self.array {
            Some(a) => a.to_array(),
            None => Ok(ArrayConfig::single()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub f_db: Option<AxisSpec>,
    #[serde(default)]
    pub nu_db: Option<AxisSpec>,
    #[serde(default)]
    pub bits: Option<Vec<u32>>,
    #[serde(default)]
    pub sat: SaturationKind,
}

impl GridSection {
    pub fn to_grid(&self) -> Result<KnobGrid> {
        let d = KnobGrid::default();
        let grid = KnobGrid {
            f_db: self.f_db.as_ref().map_or(Ok(d.f_db), |a| a.values("grid.f_db"))?,
            nu_db: self.nu_db.as_ref().map_or(Ok(d.nu_db), |a| a.values("grid.nu_db"))?,
            bits: self.bits.clone().unwrap_or(d.bits),
            sat_kind: self.sat,
        };
        grid.validate().map_err(|e| config_err(format!("grid: {e}")))?;
        Ok(grid)
    }
}

/// Overrides for a sweep preset. Every field is optional; presets fill in
/// their own defaults.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub snr_ideal_db: Option<Vec<f64>>,
    #[serde(default)]
    pub fc_ghz: Option<f64>,
    #[serde(default)]
    pub bw_mhz: Option<f64>,
    #[serde(default)]
    pub fc_over_b: Option<f64>,
    #[serde(default)]
    pub nf_db: Option<f64>,
    #[serde(default)]
    pub bits: Option<u32>,
    #[serde(default)]
    pub target_sndr_db: Option<AxisSpec>,
    #[serde(default)]
    pub grid: Option<GridSection>,
    #[serde(default)]
    pub array_n: Option<u32>,
    #[serde(default)]
    pub lna_extra_gain_db: Option<f64>,
    #[serde(default)]
    pub fom: Option<FomSection>,
    #[serde(default)]
    pub temperature_k: Option<f64>,
}

impl SweepConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(s) = &self.snr_ideal_db {
            if s.is_empty() || s.len() > MAX_AXIS_LEN {
                return Err(config_err("snr_ideal_db must be a nonempty list"));
            }
            for v in s {
                finite("snr_ideal_db", *v)?;
            }
        }
        for (name, v) in [
            ("fc_ghz", self.fc_ghz),
            ("bw_mhz", self.bw_mhz),
            ("fc_over_b", self.fc_over_b),
            ("nf_db", self.nf_db),
            ("temperature_k", self.temperature_k),
        ] {
            if let Some(v) = v {
                positive(name, v)?;
            }
        }
        if let Some(b) = self.bits {
            check_bits("bits", b)?;
        }
        if let Some(t) = &self.target_sndr_db {
            t.values("target_sndr_db")?;
        }
        if let Some(g) = &self.grid {
            g.to_grid()?;
        }
        if let Some(n) = self.array_n {
            ArraySection { n, architecture: Architecture::Digital, lna_extra_gain_db: self.lna_gain_db() }
                .to_array()?;
        }
        if let Some(f) = &self.fom {
            f.to_fom()?;
        }
        Ok(())
    }

    pub fn lna_gain_db(&self) -> f64 {
        self.lna_extra_gain_db.unwrap_or_else(default_lna_gain_db)
    }

    pub fn fom(&self) -> Result<FiguresOfMerit> {
        self.fom.unwrap_or_default().to_fom()
    }

    pub fn kt(&self) -> f64 {
        kt(self.temperature_k.unwrap_or(290.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BitSearchMode {
    #[default]
    Integer,
    Continuous,
    ContinuousVector,
}

/// Optimization request, selected by its `objective` key.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "objective", rename_all = "snake_case", deny_unknown_fields)]
pub enum OptimizeConfig {
    MinPower {
        snr_ideal_db: f64,
        target_sndr_db: f64,
        fc_ghz: f64,
        bw_mhz: f64,
        #[serde(default)]
        grid: Option<GridSection>,
        #[serde(default)]
        array: Option<ArraySection>,
        #[serde(default)]
        fom: Option<FomSection>,
        #[serde(default)]
        temperature_k: Option<f64>,
    },
    MinEbOverNf {
        snr_ideal_db: f64,
        fc_over_b: f64,
        bits: u32,
        #[serde(default)]
        nf_db: Option<AxisSpec>,
        #[serde(default)]
        fom: Option<FomSection>,
    },
    MinEbOverBits {
        snr_ideal_db: f64,
        fc_over_b: f64,
        nf_db: f64,
        #[serde(default)]
        mode: BitSearchMode,
        #[serde(default)]
        bits: Option<Vec<u32>>,
        #[serde(default)]
        fom: Option<FomSection>,
    },
}

impl OptimizeConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: Self = parse_json(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::MinPower { .. } => {
                self.search_context()?;
                self.grid()?;
                let Self::MinPower { target_sndr_db, .. } = self else { unreachable!() };
                finite("target_sndr_db", *target_sndr_db)?;
            }
            Self::MinEbOverNf { snr_ideal_db, fc_over_b, bits, .. } => {
                finite("snr_ideal_db", *snr_ideal_db)?;
                positive("fc_over_b", *fc_over_b)?;
                check_bits("bits", *bits)?;
                self.nf_axis()?;
            }
            Self::MinEbOverBits { snr_ideal_db, fc_over_b, nf_db, bits, .. } => {
                finite("snr_ideal_db", *snr_ideal_db)?;
                positive("fc_over_b", *fc_over_b)?;
                positive("nf_db", *nf_db)?;
                if let Some(bits) = bits {
                    if bits.is_empty() || bits.len() > MAX_BITS as usize {
                        return Err(config_err("bits must list 1..=12 resolutions"));
                    }
                    for b in bits {
                        check_bits("bits", *b)?;
                    }
                }
            }
        }
        self.fom()?;
        Ok(())
    }

    pub fn fom(&self) -> Result<FiguresOfMerit> {
        let (Self::MinPower { fom, .. } | Self::MinEbOverNf { fom, .. } | Self::MinEbOverBits { fom, .. }) = self;
        fom.unwrap_or_default().to_fom()
    }

    /// Context for a minimum-power search.
    pub fn search_context(&self) -> Result<SearchContext> {
        let Self::MinPower { snr_ideal_db, fc_ghz, bw_mhz, array, temperature_k, .. } = self else {
            return Err(config_err("only min_power has a search context"));
        };
        let mut ctx = SearchContext::new(
            db_to_lin(finite("snr_ideal_db", *snr_ideal_db)?),
            positive("fc_ghz", *fc_ghz)? * 1e9,
            positive("bw_mhz", *bw_mhz)? * 1e6,
        )
        .with_fom(self.fom()?);
        if let Some(a) = array {
            ctx = ctx.with_array(a.to_array()?);
        }
        if let Some(t) = temperature_k {
            ctx.kt = kt(positive("temperature_k", *t)?);
        }
        Ok(ctx)
    }

    pub fn grid(&self) -> Result<KnobGrid> {
        match self {
            Self::MinPower { grid: Some(g), .. } => g.to_grid(),
            _ => Ok(KnobGrid::default()),
        }
    }

    pub fn nf_axis(&self) -> Result<Vec<f64>> {
        match self {
            Self::MinEbOverNf { nf_db: Some(a), .. } => {
                let v = a.values("nf_db")?;
                if v.iter().any(|f| *f <= 0.0) {
                    return Err(config_err("nf_db values must be > 0"));
                }
                Ok(v)
            }
            _ => Ok(KnobGrid::default().f_db),
        }
    }

    pub fn bit_search(&self) -> Result<BitSearch> {
        let Self::MinEbOverBits { mode, bits, .. } = self else {
            return Err(config_err("only min_eb_over_bits has a resolution search"));
        };
        Ok(match mode {
            BitSearchMode::Integer => match bits {
                Some(b) => BitSearch::IntegerGrid { bits: b.clone() },
                None => BitSearch::integer(),
            },
            BitSearchMode::Continuous => BitSearch::continuous().map_err(|e| config_err(e.to_string()))?,
            BitSearchMode::ContinuousVector => BitSearch::Continuous { model: ContinuousModel::Vector },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INDOOR_LINK: &str = r#"{
        "link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20, "pathloss": "inh_nlos"},
        "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30, "sat": "tanh"}
    }"#;

    #[test]
    fn scenario_round_trip() {
        let cfg = ScenarioConfig::parse(INDOOR_LINK).unwrap();
        let s = cfg.scenario().unwrap();
        assert!((s.tx_power - 1e-3).abs() < 1e-15);
        assert_eq!(s.fc, 3.5e9);
        assert_eq!(s.rate_derating, 0.8);
        assert_eq!(cfg.fom().unwrap(), FiguresOfMerit::default());
        let k = cfg.knobs().unwrap();
        assert_eq!(k.bits, 4.0);
        let again = ScenarioConfig::parse(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn fixed_pathloss_and_sections() {
        let text = r#"{
            "link": {"tx_power_dbm": 10, "fc_ghz": 28, "bw_mhz": 400, "distance_m": 5, "pathloss": {"fixed_db": 90}},
            "knobs": {"nf_db": 3, "bits": 5, "backoff_db": 12, "sat": "clip"},
            "fom": {"gamma_adc_fj": 330},
            "array": {"n": 16, "architecture": "analog"},
            "derating": {"rate": 1.0, "sndr": 1.0}
        }"#;
        let cfg = ScenarioConfig::parse(text).unwrap();
        assert_eq!(cfg.scenario().unwrap().pathloss, PathlossModel::FixedDb(90.0));
        assert!((cfg.fom().unwrap().gamma_adc - 330e-15).abs() < 1e-27);
        assert_eq!(cfg.fom().unwrap().gamma_nf, 140e-15);
        let a = cfg.array().unwrap();
        assert_eq!((a.n, a.architecture), (16, Architecture::Analog));
        assert!((a.lna_extra_gain - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_scenarios() {
        for bad in [
            "",
            "{}",
            "[1,2]",
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}, "extra": 1}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20, "colour": 1},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 0, "bits": 4, "backoff_db": 30}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 4, "bits": 13, "backoff_db": 30}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": -3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}, "derating": {"rate": 2}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20, "pathloss": "uma"},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}}"#,
            r#"{"link": {"tx_power_dbm": 0, "fc_ghz": 3.5, "bw_mhz": 200, "distance_m": 20},
                "knobs": {"nf_db": 4, "bits": 4, "backoff_db": 30}, "array": {"n": 0}}"#,
        ] {
            assert!(matches!(ScenarioConfig::parse(bad), Err(RfeError::Config(_))), "{bad}");
        }
    }

    #[test]
    fn axis_specs() {
        let r: AxisSpec = serde_json::from_str(r#"{"start": 0, "stop": 1, "step": 0.25}"#).unwrap();
        assert_eq!(r.values("x").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let l: AxisSpec = serde_json::from_str("[3, 1]").unwrap();
        assert_eq!(l.values("x").unwrap(), vec![3.0, 1.0]);
        let huge: AxisSpec = serde_json::from_str(r#"{"start": 0, "stop": 1e9, "step": 1e-9}"#).unwrap();
        assert!(huge.values("x").is_err());
        let empty: AxisSpec = serde_json::from_str("[]").unwrap();
        assert!(empty.values("x").is_err());
        let back: AxisSpec = serde_json::from_str(r#"{"start": 1, "stop": 0, "step": 1}"#).unwrap();
        assert!(back.values("x").is_err());
    }

    #[test]
    fn sweep_config() {
        let cfg =
            SweepConfig::parse(r#"{"snr_ideal_db": [0, 10], "grid": {"bits": [2, 4], "nu_db": [0, 20]}}"#).unwrap();
        let g = cfg.grid.unwrap().to_grid().unwrap();
        assert_eq!(g.bits, vec![2, 4]);
        assert_eq!(g.f_db.len(), 51);
        assert_eq!(SweepConfig::parse("{}").unwrap(), SweepConfig::default());
        assert!(SweepConfig::parse(r#"{"bits": 0}"#).is_err());
        assert!(SweepConfig::parse(r#"{"grid": {"bits": [4, 2]}}"#).is_err());
        assert!(SweepConfig::parse(r#"{"snr": 1}"#).is_err());
    }

    #[test]
    fn optimize_configs() {
        let p = OptimizeConfig::parse(
            r#"{"objective": "min_power", "snr_ideal_db": 10, "target_sndr_db": 6, "fc_ghz": 3.5, "bw_mhz": 200}"#,
        )
        .unwrap();
        assert_eq!(p.grid().unwrap(), KnobGrid::default());
        let f =
            OptimizeConfig::parse(r#"{"objective": "min_eb_over_nf", "snr_ideal_db": 0, "fc_over_b": 70, "bits": 6}"#)
                .unwrap();
        assert_eq!(f.nf_axis().unwrap().len(), 51);
        let b = OptimizeConfig::parse(
            r#"{"objective": "min_eb_over_bits", "snr_ideal_db": 30, "fc_over_b": 70, "nf_db": 5, "mode": "continuous"}"#,
        )
        .unwrap();
        assert!(matches!(b.bit_search().unwrap(), BitSearch::Continuous { .. }));
        assert!(OptimizeConfig::parse(r#"{"objective": "max_rate"}"#).is_err());
        assert!(OptimizeConfig::parse(
            r#"{"objective": "min_eb_over_nf", "snr_ideal_db": 0, "fc_over_b": 70, "bits": 6, "oops": 1}"#
        )
        .is_err());
        assert!(OptimizeConfig::parse(
            r#"{"objective": "min_eb_over_nf", "snr_ideal_db": 0, "fc_over_b": 70, "bits": 6, "nf_db": [-1, 2]}"#
        )
        .is_err());
    }
}
