//! Run configuration, sweep records and their CSV/JSON encodings.
//!
//! Config files are flat JSON objects whose keys mirror the command-line
//! flags (`--length-km` ↔ `length_km`). Unknown keys are rejected.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bounds::{
    decoherence_lower_bound, lossy_lower_bound, optimal_params, subexp_lower_bound, subexp_upper_bound,
};
use crate::envelope::EnvelopePoint;
use crate::error::Error;
use crate::params::{ChannelParams, HardwareParams, LossModel, RepeaterConfig, DEFAULT_C_FIB_KM_S};
use crate::sim::{SimConfig, SwapProtocol};

pub const SWEEP_SCHEMA_VERSION: u32 = 1;
pub const SWEEP_CSV_HEADER: &str = "length_km,rate,n_opt,m_opt,ub,lb,lossy_lb,decoh_lb,plob,feasible";

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("missing required parameter `{0}`")]
    Missing(&'static str),
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error(transparent)]
    Invalid(#[from] Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Every setting a run can take, each optional; the flat JSON file schema.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub alpha_db: Option<f64>,
    pub length_km: Option<f64>,
    pub c_fib: Option<f64>,
    pub tau_ns: Option<f64>,
    pub channels: Option<u32>,
    pub mu: Option<f64>,
    pub detector_eff: Option<f64>,
    pub q: Option<f64>,
    pub n: Option<u32>,
    pub m: Option<u64>,
    pub lambda_t_db: Option<f64>,
    pub lambda_mem: Option<f64>,
    pub model: Option<LossModel>,
    pub length_start: Option<f64>,
    pub length_stop: Option<f64>,
    pub length_step: Option<f64>,
    pub lengths: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub workers: Option<usize>,
    pub protocol: Option<SwapProtocol>,
    pub output: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub per_mode: Option<bool>,
}

macro_rules! overlay_fields {
    ($dst:ident, $src:ident; $($f:ident),* $(,)?) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f; } )*
    };
}

impl ConfigFile {
    /// Values set in `top` replace those in `self`.
    pub fn overlay(mut self, top: ConfigFile) -> ConfigFile {
        overlay_fields!(self, top;
            alpha_db, length_km, c_fib, tau_ns, channels, mu, detector_eff, q, n, m,
            lambda_t_db, lambda_mem, model, length_start, length_stop, length_step, lengths,
            seed, trials, workers, protocol, output, format, per_mode);
        self
    }

    pub fn channel(&self) -> Result<ChannelParams, ConfigError> {
        let alpha_db = self.alpha_db.ok_or(ConfigError::Missing("alpha_db"))?;
        let length_km = self.length_km.ok_or(ConfigError::Missing("length_km"))?;
        Ok(ChannelParams::new(alpha_db, length_km)?.with_c_fib(self.c_fib.unwrap_or(DEFAULT_C_FIB_KM_S))?)
    }

    /// Channel for sweeps, where the length comes from the sweep settings.
    pub fn fiber(&self) -> Result<ChannelParams, ConfigError> {
        let alpha_db = self.alpha_db.ok_or(ConfigError::Missing("alpha_db"))?;
        Ok(ChannelParams::new(alpha_db, self.length_km.unwrap_or(0.0))?
            .with_c_fib(self.c_fib.unwrap_or(DEFAULT_C_FIB_KM_S))?)
    }

    pub fn hardware(&self) -> Result<HardwareParams, ConfigError> {
        let tau_s = self.tau_ns.ok_or(ConfigError::Missing("tau_ns"))? / 1e9;
        let channels = self.channels.ok_or(ConfigError::Missing("channels"))?;
        let q = self.q.ok_or(ConfigError::Missing("q"))?;
        let mut hw = match (self.mu, self.detector_eff) {
            (_, Some(eta)) => {
                let hw = HardwareParams::from_detector_eff(tau_s, channels, eta, q)?;
                if let Some(mu) = self.mu {
                    HardwareParams { mu, ..hw }.validate()?;
                }
                hw
            }
            (Some(mu), None) => HardwareParams::new(tau_s, channels, mu, q)?,
            (None, None) => return Err(ConfigError::Missing("mu")),
        };
        if let Some(db) = self.lambda_t_db {
            if !(db >= 0.0) {
                return Err(Error::invalid("lambda_t_db", format!("switch loss must be >= 0 dB, got {db}")).into());
            }
            hw = hw.with_switch_loss_db(db)?;
        }
        if let Some(lm) = self.lambda_mem {
            hw = hw.with_memory_survival(lm)?;
        }
        Ok(hw)
    }

    pub fn design(&self) -> Result<RepeaterConfig, ConfigError> {
        let n = self.n.ok_or(ConfigError::Missing("n"))?;
        let m = self.m.ok_or(ConfigError::Missing("m"))?;
        Ok(RepeaterConfig::new(n, m)?)
    }

    pub fn model(&self) -> LossModel {
        self.model.unwrap_or_default()
    }

    pub fn sim(&self) -> Result<SimConfig, ConfigError> {
        let sim = SimConfig::new(self.seed.unwrap_or(0), self.trials.unwrap_or(100_000))?;
        Ok(match self.workers {
            Some(w) => sim.with_workers(w),
            None => sim,
        })
    }

    /// Sweep distances: an explicit list, or start..=stop by step.
    pub fn sweep_lengths(&self) -> Result<Vec<f64>, ConfigError> {
        if let Some(list) = &self.lengths {
            if list.is_empty() {
                return Err(ConfigError::Sweep("length list is empty".into()));
            }
            if let Some(bad) = list.iter().find(|l| !(**l >= 0.0) || !l.is_finite()) {
                return Err(ConfigError::Sweep(format!("length {bad} is not a valid distance")));
            }
            return Ok(list.clone());
        }
        let start = self.length_start.ok_or(ConfigError::Missing("length_start"))?;
        let stop = self.length_stop.ok_or(ConfigError::Missing("length_stop"))?;
        let step = self.length_step.ok_or(ConfigError::Missing("length_step"))?;
        sweep_range(start, stop, step)
    }
}

/// start, start + step, ... up to and including stop (within rounding).
pub fn sweep_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, ConfigError> {
    if !(step > 0.0) || !start.is_finite() || !stop.is_finite() || start < 0.0 {
        return Err(ConfigError::Sweep(format!("start {start}, stop {stop}, step {step}")));
    }
    if stop < start {
        return Err(ConfigError::Sweep(format!("empty range: stop {stop} < start {start}")));
    }
    let count = ((stop - start) / step + 1e-9).floor() as u64 + 1;
    Ok((0..count).map(|i| start + i as f64 * step).collect())
}

/// Reads a flat JSON config file.
pub fn load_config(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_owned(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| ConfigError::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

/// One row of a distance sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub length_km: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub rate: f64,
    pub n_opt: u32,
    pub m_opt: u64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub ub: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lb: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub lossy_lb: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub decoh_lb: f64,
    #[serde(serialize_with = "ser_f64", deserialize_with = "de_f64")]
    pub plob: f64,
    pub feasible: bool,
}

fn ser_f64<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

fn de_f64<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl SweepRecord {
    /// Combines an envelope point with every bound evaluated at its distance.
    /// Bounds that do not apply to the hardware are NaN.
    pub fn new(point: &EnvelopePoint, ch: &ChannelParams, hw: &HardwareParams) -> Self {
        let ch = ch.at_length(point.length_km);
        SweepRecord {
            length_km: point.length_km,
            rate: point.rate,
            n_opt: point.n_opt,
            m_opt: point.m_opt,
            ub: subexp_upper_bound(&ch, hw),
            lb: subexp_lower_bound(&ch, hw),
            lossy_lb: lossy_lower_bound(&ch, hw).map_or(f64::NAN, |(r, _)| r),
            decoh_lb: decoherence_lower_bound(&ch, hw).map_or(f64::NAN, |s| s.rate_lb),
            plob: point.plob,
            feasible: optimal_params(&ch, hw).is_ok_and(|o| o.feasible),
        }
    }

    /// Rates divided by the mode rate M/τ.
    pub fn per_mode(mut self, hw: &HardwareParams) -> Self {
        let modes = f64::from(hw.channels) / hw.tau_s;
        for v in [
            &mut self.rate,
            &mut self.ub,
            &mut self.lb,
            &mut self.lossy_lb,
            &mut self.decoh_lb,
            &mut self.plob,
        ] {
            *v /= modes;
        }
        self
    }
}

/// 17 significant digits, '.' separator, `NaN`/`inf`/`-inf` for non-finite values.
pub fn format_f64(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        v.to_string()
    }
}

pub fn sweep_to_csv(records: &[SweepRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            format_f64(r.length_km),
            format_f64(r.rate),
            r.n_opt,
            r.m_opt,
            format_f64(r.ub),
            format_f64(r.lb),
            format_f64(r.lossy_lb),
            format_f64(r.decoh_lb),
            format_f64(r.plob),
            r.feasible
        );
    }
    out
}

fn parse_field<T: std::str::FromStr>(field: Option<&str>, name: &str, line: usize) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    let raw = field.ok_or_else(|| format!("line {line}: missing column {name}"))?;
    raw.parse().map_err(|e| format!("line {line}: column {name}: {e}"))
}

pub fn sweep_from_csv(text: &str) -> Result<Vec<SweepRecord>, String> {
    let mut lines = text.lines();
    match lines.next() {
        Some(SWEEP_CSV_HEADER) => {}
        other => return Err(format!("unexpected header {other:?}")),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let line_no = i + 2;
            let mut f = line.split(',');
            Ok(SweepRecord {
                length_km: parse_field(f.next(), "length_km", line_no)?,
                rate: parse_field(f.next(), "rate", line_no)?,
                n_opt: parse_field(f.next(), "n_opt", line_no)?,
                m_opt: parse_field(f.next(), "m_opt", line_no)?,
                ub: parse_field(f.next(), "ub", line_no)?,
                lb: parse_field(f.next(), "lb", line_no)?,
                lossy_lb: parse_field(f.next(), "lossy_lb", line_no)?,
                decoh_lb: parse_field(f.next(), "decoh_lb", line_no)?,
                plob: parse_field(f.next(), "plob", line_no)?,
                feasible: parse_field(f.next(), "feasible", line_no)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDocument {
    pub schema_version: u32,
    pub columns: Vec<String>,
    pub records: Vec<SweepRecord>,
}

pub fn sweep_to_json(records: &[SweepRecord]) -> String {
    let doc = SweepDocument {
        schema_version: SWEEP_SCHEMA_VERSION,
        columns: SWEEP_CSV_HEADER.split(',').map(str::to_owned).collect(),
        records: records.to_vec(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep records serialize");
    s.push('\n');
    s
}

pub fn sweep_from_json(text: &str) -> Result<Vec<SweepRecord>, String> {
    let doc: SweepDocument = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.schema_version != SWEEP_SCHEMA_VERSION {
        return Err(format!("unsupported schema version {}", doc.schema_version));
    }
    Ok(doc.records)
}
