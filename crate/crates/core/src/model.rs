//! Exact rate equation of the block protocol, the repeaterless benchmark,
//! and the memory/latency budget of a design point.

use serde::{Deserialize, Serialize};

use crate::params::{ChannelParams, HardwareParams, LossModel, RepeaterConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedProbabilities {
    /// Half-link transmissivity λ = e^{−αL/[2(n+1)]}.
    pub lambda_half: f64,
    /// Single attempt, single channel heralding probability μλ².
    pub p_attempt: f64,
    /// Probability that at least one of the M·m attempts of a block heralds.
    pub p_link: f64,
    /// Memory swap probability after loss modifications.
    pub q_eff: f64,
}

/// Probability that at least one of `attempts` independent tries succeeds.
pub(crate) fn any_success(p: f64, attempts: f64) -> f64 {
    if attempts == 1.0 {
        return p;
    }
    -(attempts * (-p).ln_1p()).exp_m1()
}

/// Link-level probabilities of a design point. `q_eff` is the bare q.
pub fn link_success_prob(ch: &ChannelParams, hw: &HardwareParams, cfg: &RepeaterConfig) -> DerivedProbabilities {
    let links = f64::from(cfg.links());
    let lambda_half = (-ch.alpha_l() / (2.0 * links)).exp();
    let p_attempt = hw.mu * lambda_half * lambda_half;
    let attempts = f64::from(hw.channels) * cfg.m as f64;
    DerivedProbabilities {
        lambda_half,
        p_attempt,
        p_link: any_success(p_attempt, attempts),
        q_eff: hw.q,
    }
}

/// Swap success probability seen by a station that multiplexes over `m` slots.
///
/// The switch tree has log₂ m levels; for m not a power of two the depth is
/// kept fractional.
pub fn effective_swap_prob(hw: &HardwareParams, m: u64, model: LossModel) -> f64 {
    let m = m as f64;
    match model {
        LossModel::Ideal => hw.q,
        LossModel::SwitchLoss => hw.q * hw.lambda_t.powf(m.log2()),
        LossModel::WorstDecoherence => hw.q * hw.lambda_t.powf(m.log2()) * hw.lambda_mem.powf(m),
    }
}

/// Link probabilities with `q_eff` filled in for the chosen loss model.
pub fn derived_probabilities(
    ch: &ChannelParams,
    hw: &HardwareParams,
    cfg: &RepeaterConfig,
    model: LossModel,
) -> DerivedProbabilities {
    DerivedProbabilities {
        q_eff: effective_swap_prob(hw, cfg.m, model),
        ..link_success_prob(ch, hw, cfg)
    }
}

/// End-to-end ebit rate P^{n+1} q_eff^n / (mτ), in ebits per second.
pub fn end_to_end_rate(ch: &ChannelParams, hw: &HardwareParams, cfg: &RepeaterConfig, model: LossModel) -> f64 {
    let p_link = link_success_prob(ch, hw, cfg).p_link;
    let q_eff = effective_swap_prob(hw, cfg.m, model);
    rate_from_parts(p_link, q_eff, cfg, hw.tau_s)
}

pub(crate) fn rate_from_parts(p_link: f64, q_eff: f64, cfg: &RepeaterConfig, tau_s: f64) -> f64 {
    p_link.powi(cfg.links() as i32) * q_eff.powi(cfg.n as i32) / (cfg.m as f64 * tau_s)
}

/// Repeaterless capacity over M parallel channels, −log₂(1−η)·M/τ ebits/s.
///
/// Returns `f64::INFINITY` for a lossless channel (η = 1).
pub fn plob_rate(ch: &ChannelParams, hw: &HardwareParams) -> f64 {
    let eta = ch.transmissivity();
    let per_mode = -(-eta).ln_1p() / std::f64::consts::LN_2;
    f64::from(hw.channels) / hw.tau_s * per_mode
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResourceRequirements {
    /// Initial latency T_l = T₁ + T₂.
    pub t_latency_s: f64,
    /// Round trip from a station to its link midpoint, T₁.
    pub t1_s: f64,
    /// Block wait T₂ = mτ.
    pub t2_s: f64,
    /// T₁ expressed in whole repetition periods.
    pub j_slots: u64,
    pub t_coherence_min_s: f64,
    /// Minimum register size per station, qubits.
    pub n_mem_min: u64,
    /// Register occupancy right after each memory BSM.
    pub occupancy_at_meas: u64,
}

/// Ceiling that ignores floating residue, so a ratio that is an integer up
/// to rounding is not pushed to the next one.
fn snapped_ceil(x: f64) -> u64 {
    let r = x.round();
    if (x - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r as u64
    } else {
        x.ceil() as u64
    }
}

pub fn resource_requirements(ch: &ChannelParams, hw: &HardwareParams, cfg: &RepeaterConfig) -> ResourceRequirements {
    let t1_s = ch.length_km / (f64::from(cfg.links()) * ch.c_fib);
    let j_slots = snapped_ceil(t1_s / hw.tau_s);
    let t2_s = cfg.m as f64 * hw.tau_s;
    let t_latency_s = t2_s + t1_s;
    let channels = u64::from(hw.channels);
    ResourceRequirements {
        t_latency_s,
        t1_s,
        t2_s,
        j_slots,
        // FIFO register: the last slot is consumed as the measurement happens.
        t_coherence_min_s: t_latency_s - hw.tau_s,
        n_mem_min: 2 * (cfg.m + j_slots) * channels,
        occupancy_at_meas: 2 * (j_slots + 1) * channels,
    }
}
