//! Command-line front end: `rate`, `envelope`, `optimal-params`, `resources`,
//! `simulate` and `bounds`.
//!
//! Exit codes: 0 success, 2 usage or config error, 3 I/O error,
//! 4 bound not applicable to the hardware.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::bounds::{
    decoherence_lower_bound, lossy_lower_bound, lossy_regime, optimal_params, spatial_exponent_exact,
    subexp_lower_bound, subexp_upper_bound,
};
use crate::envelope::{envelope_sweep, EnvelopeOptions};
use crate::error::Error;
use crate::io::{load_config, sweep_to_csv, sweep_to_json, ConfigError, ConfigFile, OutputFormat, SweepRecord};
use crate::model::{derived_probabilities, end_to_end_rate, plob_rate, resource_requirements};
use crate::params::LossModel;
use crate::sim::{rate_with_protocol_decoherence, simulate_rate, simulate_wait_times, SwapProtocol};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_INAPPLICABLE: i32 = 4;

/// Caps the worker count of every command.
pub const THREADS_ENV: &str = "REPEATERLAB_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "repeaterlab",
    version,
    about = "Rates, bounds and Monte Carlo for multiplexed repeater chains"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact rate, link and swap probabilities, and resource needs of one design.
    Rate(CommonArgs),
    /// Optimized rate and every bound over a range of distances.
    Envelope(CommonArgs),
    /// Continuous optimal repeater count and block length.
    OptimalParams(CommonArgs),
    /// Latency, coherence time and memory needs of one design.
    Resources(CommonArgs),
    /// Monte Carlo rate and wait-time statistics.
    Simulate(CommonArgs),
    /// Every analytic bound at one distance.
    Bounds(CommonArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Flat JSON file with the same keys as the flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha_db: Option<f64>,
    #[arg(long)]
    length_km: Option<f64>,
    /// Signal speed in fiber, km/s.
    #[arg(long)]
    c_fib: Option<f64>,
    #[arg(long)]
    tau_ns: Option<f64>,
    #[arg(long)]
    channels: Option<u32>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    detector_eff: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    m: Option<u64>,
    /// Switch insertion loss in dB.
    #[arg(long)]
    lambda_t_db: Option<f64>,
    /// Per-slot memory survival probability.
    #[arg(long)]
    lambda_mem: Option<f64>,
    #[arg(long, value_parser = parse_model)]
    model: Option<LossModel>,
    #[arg(long)]
    length_start: Option<f64>,
    #[arg(long)]
    length_stop: Option<f64>,
    #[arg(long)]
    length_step: Option<f64>,
    /// Explicit comma-separated distances; replaces start/stop/step.
    #[arg(long, value_delimiter = ',')]
    lengths: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_parser = parse_protocol)]
    protocol: Option<SwapProtocol>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Report rates in ebits per mode (divided by M/τ).
    #[arg(long)]
    per_mode: bool,
}

fn parse_model(s: &str) -> Result<LossModel, String> {
    match s {
        "ideal" => Ok(LossModel::Ideal),
        "switch-loss" => Ok(LossModel::SwitchLoss),
        "worst-decoherence" => Ok(LossModel::WorstDecoherence),
        _ => Err("expected ideal, switch-loss or worst-decoherence".into()),
    }
}

fn parse_protocol(s: &str) -> Result<SwapProtocol, String> {
    match s {
        "first-success" => Ok(SwapProtocol::FirstSuccess),
        "least-wait-end-of-block" => Ok(SwapProtocol::LeastWaitEndOfBlock),
        _ => Err("expected first-success or least-wait-end-of-block".into()),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        _ => Err("expected csv or json".into()),
    }
}

impl CommonArgs {
    fn flags(&self) -> ConfigFile {
        ConfigFile {
            alpha_db: self.alpha_db,
            length_km: self.length_km,
            c_fib: self.c_fib,
            tau_ns: self.tau_ns,
            channels: self.channels,
            mu: self.mu,
            detector_eff: self.detector_eff,
            q: self.q,
            n: self.n,
            m: self.m,
            lambda_t_db: self.lambda_t_db,
            lambda_mem: self.lambda_mem,
            model: self.model,
            length_start: self.length_start,
            length_stop: self.length_stop,
            length_step: self.length_step,
            lengths: self.lengths.clone(),
            seed: self.seed,
            trials: self.trials,
            workers: self.workers,
            protocol: self.protocol,
            output: self.output.clone(),
            format: self.format,
            per_mode: self.per_mode.then_some(true),
        }
    }

    fn resolve(&self) -> Result<ConfigFile, CliError> {
        let base = match &self.config {
            Some(path) => load_config(path)?,
            None => ConfigFile::default(),
        };
        let mut cfg = base.overlay(self.flags());
        cfg.workers = cap_workers(cfg.workers, std::env::var(THREADS_ENV).ok().as_deref())?;
        Ok(cfg)
    }
}

fn cap_workers(requested: Option<usize>, env: Option<&str>) -> Result<Option<usize>, CliError> {
    let cap = match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => match s.parse::<usize>() {
            Ok(c) if c >= 1 => Some(c),
            _ => {
                return Err(CliError::Usage(format!(
                    "{THREADS_ENV} must be a positive integer, got {s:?}"
                )))
            }
        },
        None => None,
    };
    Ok(match (requested, cap) {
        (Some(r), Some(c)) => Some(r.clamp(1, c)),
        (r, c) => r.or(c),
    })
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    Inapplicable(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Inapplicable(_) => EXIT_INAPPLICABLE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Inapplicable(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Read { .. } => CliError::Io(e.to_string()),
            ConfigError::Invalid(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundInapplicable(_) | Error::RootNotFound { .. } => CliError::Inapplicable(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

type Handler = fn(&ConfigFile) -> Result<String, CliError>;

fn dispatch(command: &Command) -> Result<(), CliError> {
    let (args, handler): (&CommonArgs, Handler) = match command {
        Command::Rate(a) => (a, cmd_rate),
        Command::Envelope(a) => (a, cmd_envelope),
        Command::OptimalParams(a) => (a, cmd_optimal_params),
        Command::Resources(a) => (a, cmd_resources),
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Bounds(a) => (a, cmd_bounds),
    };
    let cfg = args.resolve()?;
    let text = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {w} workers: {e}")))?
            .install(|| handler(&cfg))?,
        None => handler(&cfg)?,
    };
    emit(&text, cfg.output.as_deref())
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn rate_scale(cfg: &ConfigFile, channels: u32, tau_s: f64) -> (f64, &'static str) {
    if cfg.per_mode.unwrap_or(false) {
        (tau_s / f64::from(channels), "ebits_per_mode")
    } else {
        (1.0, "ebits_per_s")
    }
}

fn lines(pairs: &[(&str, String)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

fn cmd_rate(cfg: &ConfigFile) -> Result<String, CliError> {
    let ch = cfg.channel()?;
    let hw = cfg.hardware()?;
    let design = cfg.design()?;
    let model = cfg.model();
    let d = derived_probabilities(&ch, &hw, &design, model);
    let rate = end_to_end_rate(&ch, &hw, &design, model);
    let res = resource_requirements(&ch, &hw, &design);
    let (scale, unit) = rate_scale(cfg, hw.channels, hw.tau_s);
    Ok(lines(&[
        ("model", model.to_string()),
        (&format!("rate_{unit}"), (rate * scale).to_string()),
        ("p_attempt", d.p_attempt.to_string()),
        ("p_link", d.p_link.to_string()),
        ("q_eff", d.q_eff.to_string()),
        (&format!("plob_{unit}"), (plob_rate(&ch, &hw) * scale).to_string()),
        ("t_latency_s", res.t_latency_s.to_string()),
        ("t_coherence_min_s", res.t_coherence_min_s.to_string()),
        ("j_slots", res.j_slots.to_string()),
        ("n_mem_min", res.n_mem_min.to_string()),
        ("occupancy_at_meas", res.occupancy_at_meas.to_string()),
    ]))
}

fn cmd_resources(cfg: &ConfigFile) -> Result<String, CliError> {
    let ch = cfg.channel()?;
    let hw = cfg.hardware()?;
    let design = cfg.design()?;
    let res = resource_requirements(&ch, &hw, &design);
    Ok(lines(&[
        ("t1_s", res.t1_s.to_string()),
        ("t2_s", res.t2_s.to_string()),
        ("t_latency_s", res.t_latency_s.to_string()),
        ("j_slots", res.j_slots.to_string()),
        ("t_coherence_min_s", res.t_coherence_min_s.to_string()),
        ("n_mem_min", res.n_mem_min.to_string()),
        ("occupancy_at_meas", res.occupancy_at_meas.to_string()),
    ]))
}

fn cmd_envelope(cfg: &ConfigFile) -> Result<String, CliError> {
    let lengths = cfg.sweep_lengths()?;
    let ch = cfg.fiber()?;
    let hw = cfg.hardware()?;
    let points = envelope_sweep(&ch, &hw, &lengths, cfg.model(), &EnvelopeOptions::default());
    let per_mode = cfg.per_mode.unwrap_or(false);
    let records: Vec<SweepRecord> = points
        .iter()
        .map(|p| {
            let r = SweepRecord::new(p, &ch, &hw);
            if per_mode {
                r.per_mode(&hw)
            } else {
                r
            }
        })
        .collect();
    Ok(match cfg.format.unwrap_or_default() {
        OutputFormat::Csv => sweep_to_csv(&records),
        OutputFormat::Json => sweep_to_json(&records),
    })
}

fn cmd_optimal_params(cfg: &ConfigFile) -> Result<String, CliError> {
    let ch = cfg.channel()?;
    let hw = cfg.hardware()?;
    let o = optimal_params(&ch, &hw)?;
    Ok(lines(&[
        ("n_star", o.n_star.to_string()),
        ("m_star", o.m_star.to_string()),
        ("n_int", o.n_int.to_string()),
        ("m_int", o.m_int.to_string()),
        ("feasible", o.feasible.to_string()),
    ]))
}

fn or_inapplicable<T>(r: crate::Result<T>, f: impl FnOnce(T) -> String) -> String {
    match r {
        Ok(v) => f(v),
        Err(e) => format!("inapplicable ({e})"),
    }
}

fn cmd_bounds(cfg: &ConfigFile) -> Result<String, CliError> {
    let ch = cfg.channel()?;
    let hw = cfg.hardware()?;
    let (scale, unit) = rate_scale(cfg, hw.channels, hw.tau_s);
    let lossy = lossy_lower_bound(&ch, &hw);
    Ok(lines(&[
        (
            &format!("ub_{unit}"),
            (subexp_upper_bound(&ch, &hw) * scale).to_string(),
        ),
        (
            &format!("lb_{unit}"),
            (subexp_lower_bound(&ch, &hw) * scale).to_string(),
        ),
        (
            &format!("lossy_lb_{unit}"),
            or_inapplicable(lossy.clone(), |(r, _)| (r * scale).to_string()),
        ),
        (
            "lossy_regime",
            or_inapplicable(lossy, |(_, c)| format!("{:?}", lossy_regime(&ch, &c))),
        ),
        (
            &format!("decoh_lb_{unit}"),
            or_inapplicable(decoherence_lower_bound(&ch, &hw), |s| (s.rate_lb * scale).to_string()),
        ),
        (&format!("plob_{unit}"), (plob_rate(&ch, &hw) * scale).to_string()),
        (
            "spatial_exponent",
            or_inapplicable(spatial_exponent_exact(&hw), |s| s.s_exact.to_string()),
        ),
    ]))
}

fn cmd_simulate(cfg: &ConfigFile) -> Result<String, CliError> {
    let ch = cfg.channel()?;
    let hw = cfg.hardware()?;
    let design = cfg.design()?;
    let model = cfg.model();
    let sim = cfg.sim()?;
    let (scale, unit) = rate_scale(cfg, hw.channels, hw.tau_s);

    let analytic = end_to_end_rate(&ch, &hw, &design, model);
    let est = simulate_rate(&ch, &hw, &design, model, &sim)?;
    let mut report = json!({
        "schema_version": 1,
        "unit": unit,
        "seed": sim.seed,
        "trials": sim.trials,
        "model": model.to_string(),
        "length_km": ch.length_km,
        "n": design.n,
        "m": design.m,
        "rate": {
            "estimate": est.rate * scale,
            "stderr": est.std_error * scale,
            "analytic": analytic * scale,
            "z_score": est.z_score(analytic),
            "fraction": est.fraction,
            "delivered": est.delivered,
            "low_trial_count": est.low_trial_count,
        },
    });
    if let Some(protocol) = cfg.protocol {
        let wait = match simulate_wait_times(&ch, &hw, &design, protocol, &sim) {
            Ok(w) => json!({
                "protocol": protocol.to_string(),
                "blocks_sampled": w.blocks_sampled,
                "samples": w.samples,
                "mean_Y": w.mean_y,
                "stderr_Y": w.std_error_y,
                "mean_Y_analytic": w.mean_y_analytic,
                "mean_X_left": w.mean_x_left,
                "mean_X_right": w.mean_x_right,
                "mean_X_analytic": w.mean_x_analytic,
                "p_slot": w.p_slot,
                "delta1_analytic": w.delta1_analytic,
                "s_mean": w.s_mean,
            }),
            Err(Error::EmptyStats { .. }) => json!({
                "protocol": protocol.to_string(),
                "blocks_sampled": 0,
                "mean_Y": null,
                "delta1_analytic": null,
            }),
            Err(e) => return Err(e.into()),
        };
        let pr = rate_with_protocol_decoherence(&ch, &hw, &design, protocol, &sim)?;
        report["wait_times"] = wait;
        report["protocol_rate"] = json!({
            "analytic_lb": pr.analytic_lb * scale,
            "mean_Y": pr.mean_y,
            "estimate": pr.monte_carlo.rate * scale,
            "stderr": pr.monte_carlo.std_error * scale,
            "z_score": pr.monte_carlo.z_score(pr.analytic_lb),
        });
    }
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    Ok(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_cap() {
        assert_eq!(cap_workers(Some(8), Some("2")).unwrap(), Some(2));
        assert_eq!(cap_workers(Some(1), Some("4")).unwrap(), Some(1));
        assert_eq!(cap_workers(None, Some("3")).unwrap(), Some(3));
        assert_eq!(cap_workers(Some(5), None).unwrap(), Some(5));
        assert_eq!(cap_workers(None, Some("")).unwrap(), None);
        assert!(cap_workers(None, Some("zero")).is_err());
    }

    #[test]
    fn help_is_success_and_bad_flags_are_usage() {
        assert_eq!(run(["repeaterlab", "--help"]), EXIT_OK);
        assert_eq!(run(["repeaterlab", "rate", "--bogus"]), EXIT_USAGE);
        assert_eq!(run(["repeaterlab", "rate", "--model", "lossless"]), EXIT_USAGE);
    }

    #[test]
    fn error_mapping() {
        assert_eq!(
            CliError::from(Error::BoundInapplicable("x".into())).exit_code(),
            EXIT_INAPPLICABLE
        );
        assert_eq!(CliError::from(Error::invalid("q", "bad")).exit_code(), EXIT_USAGE);
        assert_eq!(CliError::from(ConfigError::Missing("n")).exit_code(), EXIT_USAGE);
    }
}
