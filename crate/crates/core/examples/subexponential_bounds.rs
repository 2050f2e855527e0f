//! Upper and lower subexponential bounds bracketing the optimized rate envelope.

use repeaterlab::bounds::{optimal_params, subexp_lower_bound, subexp_upper_bound};
use repeaterlab::envelope::{envelope_sweep, EnvelopeOptions};
use repeaterlab::params::presets;
use repeaterlab::LossModel;

fn main() {
    let hw = presets::hardware(50);
    let lengths: Vec<f64> = (1..=10).map(|i| 50.0 * f64::from(i)).collect();
    let points = envelope_sweep(
        &presets::fiber(0.0),
        &hw,
        &lengths,
        LossModel::Ideal,
        &EnvelopeOptions::default(),
    );

    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>9}",
        "L km", "LB", "envelope", "UB", "feasible"
    );
    for p in &points {
        let ch = presets::fiber(p.length_km);
        let feasible = optimal_params(&ch, &hw).is_ok_and(|o| o.feasible);
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {feasible:>9}",
            p.length_km,
            subexp_lower_bound(&ch, &hw),
            p.rate,
            subexp_upper_bound(&ch, &hw)
        );
    }
}
