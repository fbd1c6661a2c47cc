//! Sweep presets that regenerate the data behind the standard figures.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::array::{Architecture, ArrayConfig};
use crate::config::{AxisSpec, SweepConfig};
use crate::error::{Result, RfeError};
use crate::metrics::{rho_sq_numeric, sdr_ceiling};
use crate::model::SaturationKind;
use crate::optimizer::{
    stepped, tradeoff_curve, KnobGrid, MinPower, PowerSearch, RhoTable, SearchContext, TradeoffSweep,
};
use crate::sweep::SweepResult;
use crate::units::{db_to_lin, lin_to_db};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    SdrMap,
    MinPower,
    PowerBreakdown,
    VaryNf,
    VaryBits,
    BfCompare,
}

impl Preset {
    pub const ALL: [Preset; 6] =
        [Self::SdrMap, Self::MinPower, Self::PowerBreakdown, Self::VaryNf, Self::VaryBits, Self::BfCompare];

    pub fn name(self) -> &'static str {
        match self {
            Self::SdrMap => "sdr-map",
            Self::MinPower => "min-power",
            Self::PowerBreakdown => "power-breakdown",
            Self::VaryNf => "vary-nf",
            Self::VaryBits => "vary-bits",
            Self::BfCompare => "bf-compare",
        }
    }

    /// CSV columns, in output order.
    pub fn columns(self) -> &'static [&'static str] {
        match self {
            Self::SdrMap => &["bits", "nu_db", "rho_sq", "sdr_db"],
            Self::MinPower => &[
                "snr_ideal_db",
                "gap_db",
                "target_sndr_db",
                "feasible",
                "total_w",
                "nf_db",
                "bits",
                "backoff_db",
                "sndr_db",
            ],
            Self::PowerBreakdown => {
                &["snr_ideal_db", "target_sndr_db", "feasible", "nf_w", "sat_w", "adc_w", "total_w"]
            }
            Self::VaryNf => &["snr_ideal_db", "nf_db", "spectral_efficiency", "energy_per_bit_j", "is_min"],
            Self::VaryBits => &["snr_ideal_db", "bits", "spectral_efficiency", "energy_per_bit_j", "is_min"],
            Self::BfCompare => {
                &["target_sndr_db", "digital_feasible", "digital_total_w", "analog_feasible", "analog_total_w"]
            }
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Self::SdrMap => "SDR over resolution and backoff",
            Self::MinPower => "minimum power versus gap between SNR_ideal and SNDR (28 GHz, 400 MHz)",
            Self::PowerBreakdown => "power components at the minimum-power point versus SNDR (28 GHz, 400 MHz)",
            Self::VaryNf => "SE and energy per bit along the noise figure (6 bits, fc/B = 70)",
            Self::VaryBits => "SE and energy per bit along the resolution (F = 5 dB, fc/B = 70)",
            Self::BfCompare => "digital vs analog minimum power, 16 antennas, SNR_ideal = 0 dB",
        }
    }

    pub fn run(self, cfg: &SweepConfig) -> Result<SweepResult> {
        cfg.validate()?;
        let out = match self {
            Self::SdrMap => sdr_map(cfg),
            Self::MinPower => min_power(cfg),
            Self::PowerBreakdown => power_breakdown(cfg),
            Self::VaryNf => vary(cfg, false),
            Self::VaryBits => vary(cfg, true),
            Self::BfCompare => bf_compare(cfg),
        }?;
        debug_assert_eq!(out.header, self.columns());
        Ok(out
            .with_meta("preset", self.name())
            .with_meta("config", serde_json::to_value(cfg).unwrap_or_default())
            .with_meta("seed", serde_json::Value::Null))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = RfeError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| RfeError::Config(format!("unknown preset {s:?}")))
    }
}

fn grid(cfg: &SweepConfig) -> Result<KnobGrid> {
    cfg.grid.as_ref().map_or_else(|| Ok(KnobGrid::default()), |g| g.to_grid())
}

fn snrs(cfg: &SweepConfig, default: &[f64]) -> Vec<f64> {
    cfg.snr_ideal_db.clone().unwrap_or_else(|| default.to_vec())
}

fn mmwave_context(cfg: &SweepConfig, snr_db: f64) -> Result<SearchContext> {
    let mut ctx =
        SearchContext::new(db_to_lin(snr_db), cfg.fc_ghz.unwrap_or(28.0) * 1e9, cfg.bw_mhz.unwrap_or(400.0) * 1e6)
            .with_fom(cfg.fom()?);
    ctx.kt = cfg.kt();
    Ok(ctx)
}

fn header(p: Preset) -> SweepResult {
    SweepResult::new(p.columns().iter().copied())
}

fn flag(b: bool) -> f64 {
    f64::from(u8::from(b))
}

fn sdr_map(cfg: &SweepConfig) -> Result<SweepResult> {
    let g = grid(cfg)?;
    let table = RhoTable::build(&g)?;
    let mut out = header(Preset::SdrMap);
    for (bi, &b) in g.bits.iter().enumerate() {
        for (ni, &nu) in g.nu_db.iter().enumerate() {
            let rho = table.get(bi, ni);
            out.push_row(vec![b as f64, nu, rho, lin_to_db(sdr_ceiling(rho))])?;
        }
    }
    Ok(out)
}

/// Targets `snr - gap` for the configured axis, or gaps 0.25..10 dB.
fn gaps(cfg: &SweepConfig) -> Result<Vec<f64>> {
    match &cfg.target_sndr_db {
        Some(a) => a.values("target_sndr_db"),
        None => Ok(stepped(0.25, 10.0, 0.25)),
    }
}

fn min_power(cfg: &SweepConfig) -> Result<SweepResult> {
    let g = grid(cfg)?;
    let table = RhoTable::build(&g)?;
    let mut out = header(Preset::MinPower);
    let explicit = cfg.target_sndr_db.is_some();
    for snr_db in snrs(cfg, &[0.0, 10.0, 30.0]) {
        let search = PowerSearch::with_table(mmwave_context(cfg, snr_db)?, g.clone(), table.clone())?;
        let targets: Vec<f64> = gaps(cfg)?.into_iter().map(|v| if explicit { v } else { snr_db - v }).collect();
        let lin: Vec<f64> = targets.iter().map(|&t| db_to_lin(t)).collect();
        for (t, m) in targets.iter().zip(search.min_power_curve(&lin)?) {
            let row = match m {
                MinPower::Feasible(r) => vec![
                    snr_db,
                    snr_db - t,
                    *t,
                    1.0,
                    r.breakdown.total,
                    lin_to_db(r.knobs.noise_figure),
                    r.knobs.bits,
                    lin_to_db(r.backoff),
                    lin_to_db(r.sndr),
                ],
                MinPower::Infeasible { .. } => {
                    vec![snr_db, snr_db - t, *t, 0.0, f64::NAN, f64::NAN, f64::NAN, f64::NAN, f64::NAN]
                }
            };
            out.push_row(row)?;
        }
    }
    Ok(out)
}

fn power_breakdown(cfg: &SweepConfig) -> Result<SweepResult> {
    let g = grid(cfg)?;
    let table = RhoTable::build(&g)?;
    let mut out = header(Preset::PowerBreakdown);
    for snr_db in snrs(cfg, &[0.0, 10.0, 30.0]) {
        let search = PowerSearch::with_table(mmwave_context(cfg, snr_db)?, g.clone(), table.clone())?;
        let targets = match &cfg.target_sndr_db {
            Some(a) => a.values("target_sndr_db")?,
            None => stepped(snr_db - 15.0, snr_db - 0.25, 0.25),
        };
        let lin: Vec<f64> = targets.iter().map(|&t| db_to_lin(t)).collect();
        for (t, m) in targets.iter().zip(search.min_power_curve(&lin)?) {
            let row = match m {
                MinPower::Feasible(r) => {
                    let p = r.breakdown;
                    vec![snr_db, *t, 1.0, p.nf_term, p.sat_term, p.adc_term, p.total]
                }
                MinPower::Infeasible { .. } => vec![snr_db, *t, 0.0, f64::NAN, f64::NAN, f64::NAN, f64::NAN],
            };
            out.push_row(row)?;
        }
    }
    Ok(out)
}

fn vary(cfg: &SweepConfig, over_bits: bool) -> Result<SweepResult> {
    let fom = cfg.fom()?;
    let ratio = cfg.fc_over_b.unwrap_or(70.0);
    let preset = if over_bits { Preset::VaryBits } else { Preset::VaryNf };
    let mut out = header(preset);
    for snr_db in snrs(cfg, &[0.0, 10.0, 30.0]) {
        let sweep = if over_bits {
            let bits = cfg.grid.as_ref().and_then(|g| g.bits.clone()).unwrap_or_else(|| (1..=12).collect());
            TradeoffSweep::Resolution { nf_db: cfg.nf_db.unwrap_or(5.0), bits }
        } else {
            TradeoffSweep::NoiseFigure { bits: cfg.bits.unwrap_or(6), f_db: grid(cfg)?.f_db }
        };
        let curve = tradeoff_curve(db_to_lin(snr_db), ratio, &sweep, &fom)?;
        for row in curve.rows {
            out.push_row(std::iter::once(snr_db).chain(row).collect())?;
        }
    }
    Ok(out)
}

/// Digital and analog minimum-power curves sharing one `rho^2` table.
pub fn beamforming_curves(
    ctx: SearchContext,
    n: u32,
    lna_extra_gain: f64,
    grid: &KnobGrid,
    targets: &[f64],
) -> Result<(Vec<MinPower>, Vec<MinPower>)> {
    let table = RhoTable::build(grid)?;
    let run = |arch| -> Result<Vec<MinPower>> {
        let array = ArrayConfig::new(n, arch, lna_extra_gain)?;
        PowerSearch::with_table(ctx.with_array(array), grid.clone(), table.clone())?.min_power_curve(targets)
    };
    Ok((run(Architecture::Digital)?, run(Architecture::Analog)?))
}

fn bf_compare(cfg: &SweepConfig) -> Result<SweepResult> {
    let g = grid(cfg)?;
    let snr_db = snrs(cfg, &[0.0])[0];
    let n = cfg.array_n.unwrap_or(16);
    let targets = match &cfg.target_sndr_db {
        Some(a) => a.values("target_sndr_db")?,
        None => AxisSpec::Range { start: -10.0, stop: 12.0, step: 0.25 }.values("target_sndr_db")?,
    };
    let lin: Vec<f64> = targets.iter().map(|&t| db_to_lin(t)).collect();
    let ctx = mmwave_context(cfg, snr_db)?;
    let (dig, ana) = beamforming_curves(ctx, n, db_to_lin(cfg.lna_gain_db()), &g, &lin)?;
    let mut out = header(Preset::BfCompare);
    let total = |m: &MinPower| m.feasible().map_or(f64::NAN, |r| r.breakdown.total);
    for ((t, d), a) in targets.iter().zip(&dig).zip(&ana) {
        out.push_row(vec![*t, flag(d.feasible().is_some()), total(d), flag(a.feasible().is_some()), total(a)])?;
    }
    Ok(out)
}

/// `rho^2` and SDR at one point, for quick checks against [`Preset::SdrMap`].
pub fn sdr_db_at(bits: u32, nu_db: f64, kind: SaturationKind) -> Result<f64> {
    Ok(lin_to_db(sdr_ceiling(rho_sq_numeric(bits, db_to_lin(nu_db), kind)?.rho_sq)))
}
