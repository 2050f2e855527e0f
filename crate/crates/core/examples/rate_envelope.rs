//! Optimized rate-vs-distance envelope, its fixed-m counterparts and the
//! scaling law it follows.
//!
//! Pass a path to also write the sweep as CSV.

use repeaterlab::envelope::{envelope_sweep, fit_scaling, fixed_m_envelope, EnvelopeOptions, ScalingModel};
use repeaterlab::io::{sweep_to_csv, SweepRecord};
use repeaterlab::params::presets;
use repeaterlab::LossModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ch = presets::fiber(0.0);
    let hw = presets::hardware(50);
    let lengths: Vec<f64> = (15..=50).map(|i| 10.0 * f64::from(i)).collect();
    let envelope = envelope_sweep(&ch, &hw, &lengths, LossModel::Ideal, &EnvelopeOptions::default());
    let spatial_only = fixed_m_envelope(&ch, &hw, 1, &lengths, LossModel::Ideal, None)?;

    for (p, s) in envelope.iter().zip(&spatial_only).step_by(5) {
        println!(
            "{:>5} km  R = {:.3e} (n = {}, m = {})  m = 1: {:.3e}  beats direct: {}",
            p.length_km, p.rate, p.n_opt, p.m_opt, s.rate, p.beats_plob
        );
    }
    for model in [ScalingModel::SqrtExponent, ScalingModel::LinearExponent] {
        let fit = fit_scaling(&envelope, presets::ALPHA_DB, model)?;
        println!("{model:?}: slope {:.4}, r2 {:.5}", fit.slope, fit.r_squared);
    }

    if let Some(path) = std::env::args().nth(1) {
        let records: Vec<SweepRecord> = envelope.iter().map(|p| SweepRecord::new(p, &ch, &hw)).collect();
        std::fs::write(&path, sweep_to_csv(&records))?;
        println!("wrote {} rows to {path}", records.len());
    }
    Ok(())
}
