//! `rfe`: receiver front-end SNDR, power and knob-optimization tool.
//!
//! Exit status: 0 success, 2 flag or configuration error, 3 infeasible
//! optimization, 4 numerical accuracy failure.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use rfe_core::array::ArrayConfig;
use rfe_core::config::{FomSection, OptimizeConfig, ScenarioConfig, SweepConfig};
use rfe_core::linkbudget::evaluate_array_scenario;
use rfe_core::metrics::{
    calibrate_c, one_bit_capacity, rho_sq, rho_sq_numeric_with, sdr_ceiling, sndr_linear, spectral_efficiency,
    QuadratureConfig, QuantizerModel, DEFAULT_CALIBRATION_BITS,
};
use rfe_core::optimizer::{min_eb_over_b, min_eb_over_f, KnobGrid, MinPower, SearchContext};
use rfe_core::power::{one_bit_energy_per_bit, p_rfe, FiguresOfMerit};
use rfe_core::presets::{beamforming_curves, Preset};
use rfe_core::units::{db_to_lin, dbm_to_watts, lin_to_db};
use rfe_core::{RfeError, RfeKnobs, SaturationKind};
use serde_json::{json, Value};

/// Env var naming a JSON file with `gamma_adc_fj`, `gamma_nf_fj`, `gamma_max`
/// used whenever a command or config does not set them.
const FOM_ENV: &str = "RFE_FOM_FILE";

#[derive(Parser)]
#[command(name = "rfe", version, about = "Receiver front-end SNDR, power and energy-per-bit models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sat {
    Tanh,
    Clip,
}

impl From<Sat> for SaturationKind {
    fn from(s: Sat) -> Self {
        match s {
            Sat::Tanh => SaturationKind::Tanh,
            Sat::Clip => SaturationKind::Clip,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantizer {
    Uniform,
    Vector,
    Asymptotic,
    Onebit,
}

#[derive(Subcommand)]
enum Command {
    /// SNDR of one operating point.
    Sndr {
        #[arg(long, allow_negative_numbers = true)]
        snr_ideal_db: f64,
        #[arg(long)]
        nf_db: f64,
        #[arg(long)]
        bits: f64,
        #[arg(long, allow_negative_numbers = true)]
        backoff_db: f64,
        #[arg(long, value_enum, default_value = "tanh")]
        sat: Sat,
        #[arg(long, value_enum, default_value = "uniform")]
        quantizer: Quantizer,
        /// Gauss-Legendre nodes per radial panel (uniform quantizer only).
        #[arg(long, default_value_t = 16)]
        quad_nodes: usize,
    },
    /// Power breakdown of one front end.
    Power {
        #[arg(long)]
        fc_ghz: f64,
        #[arg(long)]
        bw_mhz: f64,
        #[arg(long)]
        nf_db: f64,
        #[arg(long)]
        bits: f64,
        #[arg(long, allow_negative_numbers = true)]
        pmax_dbm: f64,
    },
    /// Full link evaluation from a scenario file.
    Linkbudget {
        #[arg(long)]
        config: PathBuf,
    },
    /// Figure-data sweep written as CSV, with a `.meta.json` sidecar.
    Sweep {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Knob optimization described by a config file.
    Optimize {
        #[arg(long)]
        config: PathBuf,
    },
    /// Capacity of the 1-bit channel, and its energy per bit when the band
    /// and noise figure are given.
    Onebit {
        #[arg(long, allow_negative_numbers = true)]
        snr_db: f64,
        #[arg(long)]
        fc_ghz: Option<f64>,
        #[arg(long)]
        bw_mhz: Option<f64>,
        #[arg(long)]
        nf_db: Option<f64>,
    },
    /// Digital vs analog minimum power at one target SNDR.
    Beamforming {
        #[arg(long, default_value_t = 16)]
        n: u32,
        #[arg(long, default_value_t = 28.0)]
        fc_ghz: f64,
        #[arg(long, default_value_t = 400.0)]
        bw_mhz: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        snr_ideal_db: f64,
        #[arg(long, allow_negative_numbers = true)]
        target_sndr_db: f64,
        #[arg(long, default_value_t = 10.0)]
        lna_extra_gain_db: f64,
    },
}

enum Outcome {
    Done,
    Infeasible,
}

fn sweep_help() -> String {
    let mut s = String::from("Presets and their CSV columns:\n");
    for p in Preset::ALL {
        s.push_str(&format!("  {:<16}{}\n  {:<16}columns: {}\n", p.name(), p.describe(), "", p.columns().join(",")));
    }
    s
}

fn main() -> ExitCode {
    let cmd = Cli::command().mut_subcommand("sweep", |c| c.after_help(sweep_help()));
    let cli = match Cli::from_arg_matches(&cmd.get_matches()) {
        Ok(c) => c,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            let accuracy = e.chain().any(|c| matches!(c.downcast_ref::<RfeError>(), Some(RfeError::Accuracy { .. })));
            ExitCode::from(if accuracy { 4 } else { 2 })
        }
    }
}

fn print_json(v: &Value) -> anyhow::Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn echo_inputs(v: &Value) {
    eprintln!("inputs: {v}");
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn env_fom() -> anyhow::Result<Option<FomSection>> {
    match std::env::var_os(FOM_ENV) {
        Some(p) => Ok(Some(FomSection::parse(&read(Path::new(&p))?).context(FOM_ENV)?)),
        None => Ok(None),
    }
}

fn default_fom() -> anyhow::Result<FiguresOfMerit> {
    Ok(env_fom()?.map(|f| f.to_fom()).transpose()?.unwrap_or_default())
}

fn quantizer_model(q: Quantizer, bits: f64) -> anyhow::Result<QuantizerModel> {
    Ok(match q {
        Quantizer::Uniform => {
            if bits.fract() != 0.0 || !(1.0..=12.0).contains(&bits) {
                bail!("uniform quantizer needs integer --bits in 1..=12, got {bits}");
            }
            QuantizerModel::ScalarUniform { bits: bits as u32 }
        }
        Quantizer::Vector => QuantizerModel::OptimalVector { bits },
        Quantizer::Asymptotic => QuantizerModel::Asymptotic { bits, c: calibrate_c(&DEFAULT_CALIBRATION_BITS)? },
        Quantizer::Onebit => QuantizerModel::OneBit,
    })
}

fn run(cmd: Command) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Sndr { snr_ideal_db, nf_db, bits, backoff_db, sat, quantizer, quad_nodes } => {
            if !(nf_db > 0.0) || !snr_ideal_db.is_finite() || !backoff_db.is_finite() {
                bail!("need finite --snr-ideal-db and --backoff-db and --nf-db > 0");
            }
            let model = quantizer_model(quantizer, bits)?;
            echo_inputs(&json!({"snr_ideal_db": snr_ideal_db, "nf_db": nf_db, "bits": bits, "backoff_db": backoff_db}));
            let rho = match model {
                QuantizerModel::ScalarUniform { bits } => rho_sq_numeric_with(
                    bits,
                    db_to_lin(backoff_db),
                    sat.into(),
                    &QuadratureConfig { nodes_per_panel: quad_nodes },
                )?,
                _ => rho_sq(&model, db_to_lin(backoff_db), sat.into())?,
            };
            let sndr = sndr_linear(db_to_lin(snr_ideal_db), db_to_lin(nf_db), rho.rho_sq);
            print_json(&json!({
                "quantizer": model,
                "rho_sq": rho.rho_sq,
                "method": rho.method,
                "sdr_db": lin_to_db(sdr_ceiling(rho.rho_sq)),
                "sndr_db": lin_to_db(sndr),
                "spectral_efficiency": spectral_efficiency(sndr),
            }))?;
        }
        Command::Power { fc_ghz, bw_mhz, nf_db, bits, pmax_dbm } => {
            if !(nf_db > 0.0) || !(bw_mhz > 0.0) || !pmax_dbm.is_finite() {
                bail!("need --nf-db > 0, --bw-mhz > 0 and a finite --pmax-dbm");
            }
            let fom = default_fom()?;
            let bw = bw_mhz * 1e6;
            let knobs = RfeKnobs::new(db_to_lin(nf_db), dbm_to_watts(pmax_dbm) / bw, bits, SaturationKind::Tanh)?;
            echo_inputs(
                &json!({"fc_ghz": fc_ghz, "bw_mhz": bw_mhz, "nf_db": nf_db, "bits": bits, "pmax_dbm": pmax_dbm, "fom": fom}),
            );
            let p = p_rfe(fc_ghz * 1e9, bw, &knobs, &fom)?;
            print_json(&json!({"nf_w": p.nf_term, "sat_w": p.sat_term, "adc_w": p.adc_term, "total_w": p.total}))?;
        }
        Command::Linkbudget { config } => {
            let mut cfg = ScenarioConfig::parse(&read(&config)?)?;
            if cfg.fom.is_none() {
                cfg.fom = env_fom()?;
            }
            echo_inputs(&serde_json::to_value(cfg)?);
            let report = evaluate_array_scenario(&cfg.scenario()?, &cfg.knobs()?, &cfg.fom()?, &cfg.array()?)?;
            print_json(&serde_json::to_value(report)?)?;
        }
        Command::Sweep { preset, config, out } => {
            let preset: Preset = preset.parse()?;
            let mut cfg = match config {
                Some(p) => SweepConfig::parse(&read(&p)?)?,
                None => SweepConfig::default(),
            };
            if cfg.fom.is_none() {
                cfg.fom = env_fom()?;
            }
            let result = preset.run(&cfg)?;
            let csv = result.to_csv_string()?;
            let meta = serde_json::to_string_pretty(&result.metadata)? + "\n";
            let meta_path = sidecar(&out);
            write_atomic(&out, csv.as_bytes())?;
            write_atomic(&meta_path, meta.as_bytes())?;
            eprintln!("wrote {} rows to {}", result.rows.len(), out.display());
        }
        Command::Optimize { config } => {
            let cfg = OptimizeConfig::parse(&read(&config)?)?;
            return optimize(cfg);
        }
        Command::Onebit { snr_db, fc_ghz, bw_mhz, nf_db } => {
            if !snr_db.is_finite() {
                bail!("--snr-db must be finite");
            }
            let c = one_bit_capacity(db_to_lin(snr_db));
            echo_inputs(&json!({"snr_db": snr_db, "fc_ghz": fc_ghz, "bw_mhz": bw_mhz, "nf_db": nf_db}));
            let mut out = json!({"capacity_bps_hz": c});
            match (fc_ghz, bw_mhz, nf_db) {
                (Some(fc), Some(bw), Some(f)) => {
                    let eb = one_bit_energy_per_bit(fc * 1e9, bw * 1e6, db_to_lin(f), &default_fom()?, c)?;
                    out["energy_per_bit_j"] = json!(eb.joules);
                    out["zero_rate"] = json!(eb.zero_rate);
                }
                (None, None, None) => {}
                _ => bail!("--fc-ghz, --bw-mhz and --nf-db must be given together"),
            }
            print_json(&out)?;
        }
        Command::Beamforming { n, fc_ghz, bw_mhz, snr_ideal_db, target_sndr_db, lna_extra_gain_db } => {
            if !(fc_ghz > 0.0) || !(bw_mhz > 0.0) || !snr_ideal_db.is_finite() || !target_sndr_db.is_finite() {
                bail!("need positive --fc-ghz/--bw-mhz and finite dB values");
            }
            ArrayConfig::new(n, Default::default(), db_to_lin(lna_extra_gain_db))?;
            echo_inputs(&json!({"n": n, "fc_ghz": fc_ghz, "bw_mhz": bw_mhz, "snr_ideal_db": snr_ideal_db,
                "target_sndr_db": target_sndr_db, "lna_extra_gain_db": lna_extra_gain_db}));
            let ctx = SearchContext::new(db_to_lin(snr_ideal_db), fc_ghz * 1e9, bw_mhz * 1e6).with_fom(default_fom()?);
            let (d, a) = beamforming_curves(
                ctx,
                n,
                db_to_lin(lna_extra_gain_db),
                &KnobGrid::default(),
                &[db_to_lin(target_sndr_db)],
            )?;
            print_json(&json!({"digital": d[0], "analog": a[0]}))?;
            if d[0].feasible().is_none() && a[0].feasible().is_none() {
                return Ok(Outcome::Infeasible);
            }
        }
    }
    Ok(Outcome::Done)
}

fn optimize(mut cfg: OptimizeConfig) -> anyhow::Result<Outcome> {
    let env = env_fom()?;
    let fom_slot = match &mut cfg {
        OptimizeConfig::MinPower { fom, .. }
        | OptimizeConfig::MinEbOverNf { fom, .. }
        | OptimizeConfig::MinEbOverBits { fom, .. } => fom,
    };
    if fom_slot.is_none() {
        *fom_slot = env;
    }
    echo_inputs(&serde_json::to_value(&cfg)?);
    let fom = cfg.fom()?;
    match &cfg {
        OptimizeConfig::MinPower { target_sndr_db, .. } => {
            let search = rfe_core::optimizer::PowerSearch::new(cfg.search_context()?, cfg.grid()?)?;
            let result = search.min_power(db_to_lin(*target_sndr_db))?;
            print_json(&serde_json::to_value(result)?)?;
            if let MinPower::Infeasible { best_sndr } = result {
                eprintln!("infeasible: best achievable SNDR is {:.3} dB", lin_to_db(best_sndr));
                return Ok(Outcome::Infeasible);
            }
        }
        OptimizeConfig::MinEbOverNf { snr_ideal_db, fc_over_b, bits, .. } => {
            let r = min_eb_over_f(db_to_lin(*snr_ideal_db), *fc_over_b, *bits, &cfg.nf_axis()?, &fom)?;
            print_json(&json!({"nf_db": lin_to_db(r.knobs.noise_figure), "result": r}))?;
        }
        OptimizeConfig::MinEbOverBits { snr_ideal_db, fc_over_b, nf_db, .. } => {
            let r = min_eb_over_b(db_to_lin(*snr_ideal_db), *fc_over_b, db_to_lin(*nf_db), &fom, &cfg.bit_search()?)?;
            print_json(&serde_json::to_value(r)?)?;
        }
    }
    Ok(Outcome::Done)
}

fn sidecar(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".meta.json");
    out.with_file_name(name)
}

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let name = path.file_name().ok_or_else(|| anyhow!("output path has no file name"))?;
    let mut tmp_name = std::ffi::OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".{}.partial", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.with_context(|| format!("writing {}", path.display()))
}
