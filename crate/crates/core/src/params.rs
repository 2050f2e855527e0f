//! Parameter types for a linear repeater chain.
//!
//! Attenuation is carried in dB/km everywhere in the public surface and
//! converted to the natural (1/km) coefficient only where an exponential
//! is evaluated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Group velocity of light in standard telecom fiber, km/s.
pub const DEFAULT_C_FIB_KM_S: f64 = 2.0e5;

/// Converts a fiber attenuation in dB/km into the natural coefficient in 1/km.
pub fn to_natural_loss(alpha_db: f64) -> Result<f64> {
    if !(alpha_db > 0.0) || !alpha_db.is_finite() {
        return Err(Error::invalid(
            "alpha_db",
            format!("must be positive and finite, got {alpha_db}"),
        ));
    }
    Ok(alpha_db * std::f64::consts::LN_10 / 10.0)
}

/// Transmissivity of an element with the given insertion loss in dB.
pub fn db_to_transmissivity(loss_db: f64) -> f64 {
    10f64.powf(-loss_db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    /// Fiber attenuation, dB/km.
    pub alpha_db: f64,
    /// End-to-end distance, km.
    pub length_km: f64,
    /// Signal speed in fiber, km/s.
    pub c_fib: f64,
}

impl ChannelParams {
    pub fn new(alpha_db: f64, length_km: f64) -> Result<Self> {
        let ch = ChannelParams {
            alpha_db,
            length_km,
            c_fib: DEFAULT_C_FIB_KM_S,
        };
        ch.validate()?;
        Ok(ch)
    }

    pub fn with_c_fib(mut self, c_fib: f64) -> Result<Self> {
        self.c_fib = c_fib;
        self.validate()?;
        Ok(self)
    }

    /// Same fiber, different end-to-end length.
    pub fn at_length(&self, length_km: f64) -> Self {
        ChannelParams { length_km, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        to_natural_loss(self.alpha_db)?;
        if !(self.length_km >= 0.0) || !self.length_km.is_finite() {
            return Err(Error::invalid(
                "length_km",
                format!("must be >= 0, got {}", self.length_km),
            ));
        }
        if !(self.c_fib > 0.0) || !self.c_fib.is_finite() {
            return Err(Error::invalid("c_fib", format!("must be positive, got {}", self.c_fib)));
        }
        Ok(())
    }

    /// Natural attenuation coefficient, 1/km.
    pub fn alpha(&self) -> f64 {
        self.alpha_db * std::f64::consts::LN_10 / 10.0
    }

    /// Total channel loss exponent αL (natural units).
    pub fn alpha_l(&self) -> f64 {
        self.alpha() * self.length_km
    }

    /// End-to-end transmissivity η = e^{−αL}.
    pub fn transmissivity(&self) -> f64 {
        (-self.alpha_l()).exp()
    }
}

/// Device parameters shared by every station of the chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardwareParams {
    /// Source repetition period τ, seconds.
    pub tau_s: f64,
    /// Parallel spatial/spectral channels per elementary link.
    pub channels: u32,
    /// Linear-optical BSM efficiency μ.
    pub mu: f64,
    /// Quantum-memory entanglement swap success probability.
    pub q: f64,
    /// Per-switch transmissivity.
    pub lambda_t: f64,
    /// Per-time-step memory survival probability.
    pub lambda_mem: f64,
    /// Detector efficiency η_d, when μ was derived from it.
    pub detector_eff: Option<f64>,
}

impl HardwareParams {
    /// Hardware with lossless switches and non-decohering memories.
    pub fn new(tau_s: f64, channels: u32, mu: f64, q: f64) -> Result<Self> {
        let hw = HardwareParams {
            tau_s,
            channels,
            mu,
            q,
            lambda_t: 1.0,
            lambda_mem: 1.0,
            detector_eff: None,
        };
        hw.validate()?;
        Ok(hw)
    }

    /// Hardware whose BSM efficiency comes from the detector efficiency, μ = η_d²/2.
    pub fn from_detector_eff(tau_s: f64, channels: u32, detector_eff: f64, q: f64) -> Result<Self> {
        let mut hw = HardwareParams::new(tau_s, channels, 0.5 * detector_eff * detector_eff, q)?;
        hw.detector_eff = Some(detector_eff);
        hw.validate()?;
        Ok(hw)
    }

    pub fn with_switch_transmissivity(mut self, lambda_t: f64) -> Result<Self> {
        self.lambda_t = lambda_t;
        self.validate()?;
        Ok(self)
    }

    pub fn with_switch_loss_db(self, loss_db: f64) -> Result<Self> {
        self.with_switch_transmissivity(db_to_transmissivity(loss_db))
    }

    pub fn with_memory_survival(mut self, lambda_mem: f64) -> Result<Self> {
        self.lambda_mem = lambda_mem;
        self.validate()?;
        Ok(self)
    }

    pub fn with_channels(mut self, channels: u32) -> Result<Self> {
        self.channels = channels;
        self.validate()?;
        Ok(self)
    }

    pub fn with_q(mut self, q: f64) -> Result<Self> {
        self.q = q;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_s > 0.0) || !self.tau_s.is_finite() {
            return Err(Error::invalid("tau", format!("must be positive, got {}", self.tau_s)));
        }
        if self.channels == 0 {
            return Err(Error::invalid("channels", "must be at least 1"));
        }
        // μ = 0 and q = 0 are accepted as degenerate zero-rate hardware.
        check_closed_unit("mu", self.mu)?;
        check_closed_unit("q", self.q)?;
        check_open_unit("lambda_t", self.lambda_t)?;
        check_open_unit("lambda_mem", self.lambda_mem)?;
        if let Some(eta) = self.detector_eff {
            check_open_unit("detector_eff", eta)?;
            let derived = 0.5 * eta * eta;
            if (self.mu - derived).abs() > 1e-12 * derived {
                return Err(Error::invalid(
                    "mu",
                    format!("mu = {} contradicts detector_eff^2/2 = {derived}", self.mu),
                ));
            }
        }
        Ok(())
    }

    /// Product Mμ that appears in every bound.
    pub fn m_mu(&self) -> f64 {
        f64::from(self.channels) * self.mu
    }
}

fn check_closed_unit(name: &'static str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in [0, 1], got {v}")))
    }
}

fn check_open_unit(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must lie in (0, 1], got {v}")))
    }
}

/// Design point: `n` repeater stations, time-multiplexing block of `m` slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepeaterConfig {
    pub n: u32,
    pub m: u64,
}

impl RepeaterConfig {
    pub fn new(n: u32, m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::invalid("m", "block length must be at least 1"));
        }
        Ok(RepeaterConfig { n, m })
    }

    /// Number of elementary links, n + 1.
    pub fn links(&self) -> u32 {
        self.n + 1
    }
}

/// Which device losses modify the memory swap probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LossModel {
    /// Swap succeeds with the bare probability q.
    #[default]
    Ideal,
    /// q · λ_t^{log₂ m}.
    SwitchLoss,
    /// q · λ_t^{log₂ m} · λ_mem^m, every qubit charged a full block of storage.
    WorstDecoherence,
}

impl std::fmt::Display for LossModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(match self {
            LossModel::Ideal => "ideal",
            LossModel::SwitchLoss => "switch-loss",
            LossModel::WorstDecoherence => "worst-decoherence",
        })
    }
}

/// Reference parameter set: 0.15 dB/km fiber, τ = 50 ns, μ = 0.405, q = 0.255.
pub mod presets {
    use super::*;

    pub const ALPHA_DB: f64 = 0.15;
    pub const TAU_S: f64 = 50e-9;
    pub const MU: f64 = 0.405;
    pub const Q: f64 = 0.255;

    /// 0.15 dB/km fiber of the given length.
    pub fn fiber(length_km: f64) -> ChannelParams {
        ChannelParams {
            alpha_db: ALPHA_DB,
            length_km,
            c_fib: DEFAULT_C_FIB_KM_S,
        }
    }

    /// τ = 50 ns, μ = 0.405, q = 0.255 with `channels` parallel channels.
    pub fn hardware(channels: u32) -> HardwareParams {
        HardwareParams {
            tau_s: TAU_S,
            channels,
            mu: MU,
            q: Q,
            lambda_t: 1.0,
            lambda_mem: 1.0,
            detector_eff: None,
        }
    }
}
