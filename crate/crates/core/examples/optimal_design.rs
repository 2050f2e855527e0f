//! Continuous optimal repeater count and block length versus distance, with
//! the integer designs they suggest.

use repeaterlab::bounds::optimal_params;
use repeaterlab::envelope::{exact_envelope, EnvelopeOptions};
use repeaterlab::params::presets;
use repeaterlab::LossModel;

fn main() -> repeaterlab::Result<()> {
    let hw = presets::hardware(1);
    println!(
        "{:>6} {:>8} {:>10} {:>6} {:>8} {:>9} {:>14}",
        "L km", "n*", "m*", "n", "m", "feasible", "best (n, m)"
    );
    for l in [50.0, 100.0, 200.0, 300.0, 400.0, 500.0] {
        let ch = presets::fiber(l);
        let o = optimal_params(&ch, &hw)?;
        let best = exact_envelope(&ch, &hw, LossModel::Ideal, &EnvelopeOptions::default());
        println!(
            "{l:>6} {:>8.3} {:>10.2} {:>6} {:>8} {:>9} {:>14}",
            o.n_star,
            o.m_star,
            o.n_int,
            o.m_int,
            o.feasible,
            format!("({}, {})", best.n_opt, best.m_opt)
        );
    }
    Ok(())
}
