//! Knob searches: minimum power at a target SNDR, minimum energy per bit
//! over the noise figure or the resolution, and SE / energy-per-bit curves.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{array_power, Architecture, ArrayConfig};
use crate::error::{invalid, Result};
use crate::metrics::{
    calibrate_c, rho_sq, rho_sq_numeric, sndr_linear, spectral_efficiency, QuantizerModel, DEFAULT_CALIBRATION_BITS,
};
use crate::model::{RfeKnobs, SaturationKind, MAX_BITS};
use crate::power::{energy_per_bit, FiguresOfMerit, PowerBreakdown};
use crate::sweep::SweepResult;
use crate::units::{db_to_lin, lin_to_db, KT_REF};

/// `start, start + step, ...` up to `stop` inclusive.
pub fn stepped(start: f64, stop: f64, step: f64) -> Vec<f64> {
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    (0..n).map(|i| start + i as f64 * step).collect()
}

/// Discretized knob space. Backoffs are relative to the input energy so the
/// same grid serves every operating point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnobGrid {
    pub f_db: Vec<f64>,
    pub nu_db: Vec<f64>,
    pub bits: Vec<u32>,
    pub sat_kind: SaturationKind,
}

impl Default for KnobGrid {
    fn default() -> Self {
        Self {
            f_db: stepped(0.5, 13.0, 0.25),
            nu_db: stepped(-10.0, 60.0, 2.0),
            bits: (1..=12).collect(),
            sat_kind: SaturationKind::Tanh,
        }
    }
}

fn strictly_sorted<T: PartialOrd>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl KnobGrid {
    pub fn validate(&self) -> Result<()> {
        if self.f_db.is_empty() || self.nu_db.is_empty() || self.bits.is_empty() {
            return Err(invalid("knob grid axes must be nonempty"));
        }
        if !strictly_sorted(&self.f_db) || !strictly_sorted(&self.nu_db) || !strictly_sorted(&self.bits) {
            return Err(invalid("knob grid axes must be strictly increasing"));
        }
        if !(self.f_db[0] > 0.0) || self.f_db.iter().chain(&self.nu_db).any(|v| !v.is_finite()) {
            return Err(invalid("noise figures must be > 0 dB and all grid values finite"));
        }
        if self.bits.iter().any(|b| !(1..=MAX_BITS).contains(b)) {
            return Err(invalid(format!("grid bits must lie in 1..={MAX_BITS}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.f_db.len() * self.nu_db.len() * self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Link-level inputs shared by every point of a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchContext {
    pub snr_ideal: f64,
    pub fc: f64,
    pub bandwidth: f64,
    pub fom: FiguresOfMerit,
    pub kt: f64,
    pub array: ArrayConfig,
}

impl SearchContext {
    pub fn new(snr_ideal: f64, fc: f64, bandwidth: f64) -> Self {
        Self { snr_ideal, fc, bandwidth, fom: FiguresOfMerit::default(), kt: KT_REF, array: ArrayConfig::single() }
    }

    pub fn with_array(self, array: ArrayConfig) -> Self {
        Self { array, ..self }
    }

    pub fn with_fom(self, fom: FiguresOfMerit) -> Self {
        Self { fom, ..self }
    }
}

/// One evaluated knob setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptResult {
    pub knobs: RfeKnobs,
    pub quantizer: QuantizerModel,
    /// Backoff seen by the saturation stage. For analog arrays this is
    /// relative to the combined signal.
    pub backoff: f64,
    pub breakdown: PowerBreakdown,
    pub sndr: f64,
    pub spectral_efficiency: f64,
    /// J/bit; infinite when the rate is zero.
    pub energy_per_bit: f64,
}

fn eb_from_power(total: f64, se: f64, bandwidth: f64) -> f64 {
    if se > 0.0 {
        total / (se * bandwidth)
    } else {
        f64::INFINITY
    }
}

fn assemble(ctx: &SearchContext, f: f64, bits: u32, backoff: f64, kind: SaturationKind, rho: f64) -> Result<OptResult> {
    let n = ctx.array.n as f64;
    let e_r = ctx.snr_ideal * ctx.kt;
    let n0 = ctx.kt * f;
    let (e_max, sndr) = match ctx.array.architecture {
        Architecture::Digital => (backoff * (e_r + n0), n * sndr_linear(ctx.snr_ideal, f, rho)),
        Architecture::Analog => (backoff * (n * e_r + n0), sndr_linear(n * ctx.snr_ideal, f, rho)),
    };
    let knobs = RfeKnobs::new(f, e_max, bits as f64, kind)?;
    let breakdown = array_power(ctx.fc, ctx.bandwidth, &knobs, &ctx.fom, &ctx.array)?;
    let se = spectral_efficiency(sndr);
    Ok(OptResult {
        knobs,
        quantizer: QuantizerModel::ScalarUniform { bits },
        backoff,
        breakdown,
        sndr,
        spectral_efficiency: se,
        energy_per_bit: eb_from_power(breakdown.total, se, ctx.bandwidth),
    })
}

/// Evaluates a single knob setting from scratch.
pub fn evaluate_point(
    ctx: &SearchContext,
    noise_figure: f64,
    bits: u32,
    backoff: f64,
    kind: SaturationKind,
) -> Result<OptResult> {
    let rho = rho_sq_numeric(bits, backoff, kind)?.rho_sq;
    assemble(ctx, noise_figure, bits, backoff, kind, rho)
}

/// `rho^2` on the (bits, backoff) plane of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoTable {
    bits: Vec<u32>,
    nu_db: Vec<f64>,
    kind: SaturationKind,
    values: Vec<f64>,
}

impl RhoTable {
    pub fn build(grid: &KnobGrid) -> Result<Self> {
        grid.validate()?;
        let cells: Vec<(u32, f64)> =
            grid.bits.iter().flat_map(|&b| grid.nu_db.iter().map(move |&nu| (b, nu))).collect();
        let values = cells
            .par_iter()
            .map(|&(b, nu)| rho_sq_numeric(b, db_to_lin(nu), grid.sat_kind).map(|r| r.rho_sq))
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self { bits: grid.bits.clone(), nu_db: grid.nu_db.clone(), kind: grid.sat_kind, values })
    }

    pub fn get(&self, bits_idx: usize, nu_idx: usize) -> f64 {
        self.values[bits_idx * self.nu_db.len() + nu_idx]
    }

    fn matches(&self, grid: &KnobGrid) -> bool {
        self.bits == grid.bits && self.nu_db == grid.nu_db && self.kind == grid.sat_kind
    }
}

/// Outcome of a minimum-power search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "status")]
pub enum MinPower {
    Feasible(OptResult),
    /// No grid point reaches the target; `best_sndr` is the grid maximum.
    Infeasible {
        best_sndr: f64,
    },
}

impl MinPower {
    pub fn feasible(&self) -> Option<&OptResult> {
        match self {
            Self::Feasible(r) => Some(r),
            Self::Infeasible { .. } => None,
        }
    }
}

/// Exhaustive search over a [`KnobGrid`] at one operating point.
#[derive(Debug, Clone)]
pub struct PowerSearch {
    ctx: SearchContext,
    grid: KnobGrid,
    table: RhoTable,
}

impl PowerSearch {
    pub fn new(ctx: SearchContext, grid: KnobGrid) -> Result<Self> {
        let table = RhoTable::build(&grid)?;
        Self::with_table(ctx, grid, table)
    }

    /// Reuses a table built for the same bits, backoffs and saturation kind.
    pub fn with_table(ctx: SearchContext, grid: KnobGrid, table: RhoTable) -> Result<Self> {
        grid.validate()?;
        if !table.matches(&grid) {
            return Err(invalid("rho table was built for a different grid"));
        }
        if !(ctx.snr_ideal >= 0.0) || !(ctx.kt > 0.0) {
            return Err(invalid("search needs snr_ideal >= 0 and kT > 0"));
        }
        Ok(Self { ctx, grid, table })
    }

    pub fn table(&self) -> &RhoTable {
        &self.table
    }

    pub fn context(&self) -> &SearchContext {
        &self.ctx
    }

    /// Every grid point, ordered by noise figure, then bits, then backoff.
    pub fn evaluate_all(&self) -> Result<Vec<OptResult>> {
        let mut out = Vec::with_capacity(self.grid.len());
        for &f_db in &self.grid.f_db {
            for (bi, &b) in self.grid.bits.iter().enumerate() {
                for (ni, &nu_db) in self.grid.nu_db.iter().enumerate() {
                    out.push(assemble(
                        &self.ctx,
                        db_to_lin(f_db),
                        b,
                        db_to_lin(nu_db),
                        self.grid.sat_kind,
                        self.table.get(bi, ni),
                    )?);
                }
            }
        }
        Ok(out)
    }

    pub fn max_sndr(&self) -> Result<f64> {
        Ok(self.evaluate_all()?.iter().map(|r| r.sndr).fold(0.0, f64::max))
    }

    /// Cheapest point with `sndr >= target`; ties go to the smallest noise
    /// figure, then resolution, then saturation level.
    pub fn min_power(&self, target_sndr: f64) -> Result<MinPower> {
        if !(target_sndr >= 0.0) {
            return Err(invalid(format!("target SNDR must be >= 0, got {target_sndr}")));
        }
        Ok(select_min_power(&self.evaluate_all()?, target_sndr))
    }

    /// Minimum power for each target, sharing one grid evaluation.
    pub fn min_power_curve(&self, targets: &[f64]) -> Result<Vec<MinPower>> {
        let all = self.evaluate_all()?;
        Ok(targets.iter().map(|&t| select_min_power(&all, t)).collect())
    }
}

fn select_min_power(points: &[OptResult], target: f64) -> MinPower {
    let mut best: Option<&OptResult> = None;
    let mut best_sndr = 0.0f64;
    for p in points {
        best_sndr = best_sndr.max(p.sndr);
        if p.sndr >= target && best.is_none_or(|b| p.breakdown.total < b.breakdown.total) {
            best = Some(p);
        }
    }
    match best {
        Some(p) => MinPower::Feasible(*p),
        None => MinPower::Infeasible { best_sndr },
    }
}

pub fn min_power_at_sndr(target_sndr: f64, ctx: SearchContext, grid: KnobGrid) -> Result<MinPower> {
    PowerSearch::new(ctx, grid)?.min_power(target_sndr)
}

/// Energy-per-bit point with the saturation term neglected and no backoff
/// loss. Power terms are per Hz of bandwidth.
pub fn evaluate_unsaturated(
    snr_ideal: f64,
    fc_over_b: f64,
    noise_figure: f64,
    model: &QuantizerModel,
    fom: &FiguresOfMerit,
) -> Result<OptResult> {
    if !(fc_over_b > 0.0) {
        return Err(invalid(format!("fc/B must be > 0, got {fc_over_b}")));
    }
    let rho = rho_sq(model, f64::INFINITY, SaturationKind::Tanh)?.rho_sq;
    let knobs = RfeKnobs::new(noise_figure, f64::INFINITY, model.bits(), SaturationKind::Tanh)?;
    let sndr = sndr_linear(snr_ideal, noise_figure, rho);
    let se = spectral_efficiency(sndr);
    let eb = energy_per_bit(fc_over_b, 1.0, &knobs, fom, se, true)?;
    let breakdown =
        PowerBreakdown::new(fom.gamma_nf * fc_over_b / (noise_figure - 1.0), 0.0, fom.gamma_adc * knobs.bits.exp2());
    Ok(OptResult {
        knobs,
        quantizer: *model,
        backoff: f64::INFINITY,
        breakdown,
        sndr,
        spectral_efficiency: se,
        energy_per_bit: eb.joules,
    })
}

fn argmin_eb(points: Vec<OptResult>) -> Result<(usize, OptResult)> {
    let mut best: Option<(usize, OptResult)> = None;
    for (i, p) in points.into_iter().enumerate() {
        if best.as_ref().is_none_or(|(_, b)| p.energy_per_bit < b.energy_per_bit) {
            best = Some((i, p));
        }
    }
    best.ok_or_else(|| invalid("search grid is empty"))
}

/// Noise figure minimizing the energy per bit at a fixed resolution;
/// ties go to the smaller noise figure.
pub fn min_eb_over_f(
    snr_ideal: f64,
    fc_over_b: f64,
    bits: u32,
    f_db: &[f64],
    fom: &FiguresOfMerit,
) -> Result<OptResult> {
    let model = QuantizerModel::ScalarUniform { bits };
    let points = f_db
        .iter()
        .map(|&f| evaluate_unsaturated(snr_ideal, fc_over_b, db_to_lin(f), &model, fom))
        .collect::<Result<Vec<_>>>()?;
    Ok(argmin_eb(points)?.1)
}

/// `rho^2` model for the continuous-resolution relaxation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "model")]
pub enum ContinuousModel {
    Asymptotic { c: f64 },
    Vector,
}

impl ContinuousModel {
    /// Asymptotic model calibrated on the default resolutions.
    pub fn calibrated() -> Result<Self> {
        Ok(Self::Asymptotic { c: calibrate_c(&DEFAULT_CALIBRATION_BITS)? })
    }

    fn quantizer(&self, bits: f64) -> QuantizerModel {
        match *self {
            Self::Asymptotic { c } => QuantizerModel::Asymptotic { bits, c },
            Self::Vector => QuantizerModel::OptimalVector { bits },
        }
    }

    /// `(1 - rho^2, d(1 - rho^2)/db)`.
    fn distortion(&self, b: f64) -> (f64, f64) {
        let p = (-2.0 * b).exp2();
        let ln2 = std::f64::consts::LN_2;
        match *self {
            Self::Asymptotic { c } => (c * b * p, c * p * (1.0 - 2.0 * ln2 * b)),
            Self::Vector => (p, -2.0 * ln2 * p),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum BitSearch {
    /// Exhaustive search with the numeric scalar-uniform model.
    IntegerGrid { bits: Vec<u32> },
    /// Stationary point of the energy per bit over real `b`.
    Continuous { model: ContinuousModel },
}

impl BitSearch {
    pub fn integer() -> Self {
        Self::IntegerGrid { bits: (1..=MAX_BITS).collect() }
    }

    pub fn continuous() -> Result<Self> {
        Ok(Self::Continuous { model: ContinuousModel::calibrated()? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitOptimum {
    /// Integer resolution with the lowest energy per bit.
    pub bits: u32,
    pub result: OptResult,
    /// Real-valued stationary point (continuous mode only).
    pub root: Option<f64>,
    /// The optimum sits on the edge of the search range.
    pub boundary: bool,
}

const B_MIN: f64 = 1.0;
const B_MAX: f64 = MAX_BITS as f64;

/// Resolution minimizing the energy per bit at a fixed noise figure.
pub fn min_eb_over_b(
    snr_ideal: f64,
    fc_over_b: f64,
    noise_figure: f64,
    fom: &FiguresOfMerit,
    mode: &BitSearch,
) -> Result<BitOptimum> {
    match mode {
        BitSearch::IntegerGrid { bits } => {
            if bits.is_empty() {
                return Err(invalid("resolution grid is empty"));
            }
            let points = bits
                .iter()
                .map(|&b| {
                    let model = QuantizerModel::ScalarUniform { bits: b };
                    evaluate_unsaturated(snr_ideal, fc_over_b, noise_figure, &model, fom)
                })
                .collect::<Result<Vec<_>>>()?;
            let (i, result) = argmin_eb(points)?;
            Ok(BitOptimum { bits: bits[i], result, root: None, boundary: i == 0 || i + 1 == bits.len() })
        }
        BitSearch::Continuous { model } => continuous_bits(snr_ideal, fc_over_b, noise_figure, fom, model),
    }
}

fn continuous_bits(
    snr: f64,
    fc_over_b: f64,
    f: f64,
    fom: &FiguresOfMerit,
    model: &ContinuousModel,
) -> Result<BitOptimum> {
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(invalid("continuous resolution search needs a finite snr_ideal > 0"));
    }
    if !(f > 1.0) || !(fc_over_b > 0.0) {
        return Err(invalid("need F > 1 and fc/B > 0"));
    }
    fom.validate()?;
    let nf = fom.gamma_nf * fc_over_b / (f - 1.0);
    let ln2 = std::f64::consts::LN_2;
    // d ln(E_b) / db
    let slope = |b: f64| {
        let (d, dd) = model.distortion(b);
        let den = f + d * snr;
        let s = snr * (1.0 - d) / den;
        let ds = -snr * (f + snr) / (den * den) * dd;
        let se = s.ln_1p() / ln2;
        let adc = fom.gamma_adc * b.exp2();
        adc * ln2 / (nf + adc) - ds / ((1.0 + s) * ln2 * se)
    };
    let eb = |b: f64| -> Result<f64> {
        Ok(evaluate_unsaturated(snr, fc_over_b, f, &model.quantizer(b), fom)?.energy_per_bit)
    };

    const SCAN: f64 = 0.01;
    let mut bracket = None;
    let mut lo = B_MIN;
    let mut g_lo = slope(lo);
    while lo < B_MAX {
        let hi = (lo + SCAN).min(B_MAX);
        let g_hi = slope(hi);
        if g_lo < 0.0 && g_hi >= 0.0 {
            bracket = Some((lo, hi));
            break;
        }
        lo = hi;
        g_lo = g_hi;
    }
    let (root, boundary) = match bracket {
        Some((mut a, mut b)) => {
            while b - a > 1e-6 {
                let m = 0.5 * (a + b);
                if slope(m) < 0.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            (0.5 * (a + b), false)
        }
        None => (if eb(B_MIN)? <= eb(B_MAX)? { B_MIN } else { B_MAX }, true),
    };
    let (down, up) = (root.floor().max(B_MIN), root.ceil().min(B_MAX));
    let bits = if eb(up)? < eb(down)? { up } else { down } as u32;
    let result = evaluate_unsaturated(snr, fc_over_b, f, &model.quantizer(bits as f64), fom)?;
    Ok(BitOptimum { bits, result, root: Some(root), boundary })
}

/// Which knob a tradeoff curve sweeps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "vary")]
pub enum TradeoffSweep {
    NoiseFigure { bits: u32, f_db: Vec<f64> },
    Resolution { nf_db: f64, bits: Vec<u32> },
}

/// Spectral efficiency and energy per bit along one knob, scalar uniform
/// quantizer, saturation neglected.
///
/// Columns: knob (`nf_db` or `bits`), `spectral_efficiency`,
/// `energy_per_bit_j`, `is_min` (1 on the energy-per-bit minimizer).
pub fn tradeoff_curve(
    snr_ideal: f64,
    fc_over_b: f64,
    sweep: &TradeoffSweep,
    fom: &FiguresOfMerit,
) -> Result<SweepResult> {
    let (knob, points): (&str, Vec<(f64, OptResult)>) = match sweep {
        TradeoffSweep::NoiseFigure { bits, f_db } => {
            let model = QuantizerModel::ScalarUniform { bits: *bits };
            let pts = f_db
                .iter()
                .map(|&f| Ok((f, evaluate_unsaturated(snr_ideal, fc_over_b, db_to_lin(f), &model, fom)?)))
                .collect::<Result<_>>()?;
            ("nf_db", pts)
        }
        TradeoffSweep::Resolution { nf_db, bits } => {
            let pts = bits
                .iter()
                .map(|&b| {
                    let model = QuantizerModel::ScalarUniform { bits: b };
                    Ok((b as f64, evaluate_unsaturated(snr_ideal, fc_over_b, db_to_lin(*nf_db), &model, fom)?))
                })
                .collect::<Result<_>>()?;
            ("bits", pts)
        }
    };
    if points.is_empty() {
        return Err(invalid("tradeoff sweep is empty"));
    }
    let (imin, _) = argmin_eb(points.iter().map(|p| p.1).collect())?;
    let mut out = SweepResult::new([knob, "spectral_efficiency", "energy_per_bit_j", "is_min"])
        .with_meta("snr_ideal_db", lin_to_db(snr_ideal))
        .with_meta("fc_over_b", fc_over_b)
        .with_meta("sweep", serde_json::to_value(sweep).unwrap_or_default());
    for (i, (k, p)) in points.iter().enumerate() {
        out.push_row(vec![*k, p.spectral_efficiency, p.energy_per_bit, f64::from(u8::from(i == imin))])?;
    }
    Ok(out)
}
