//! How switch insertion loss erodes the lower bound and the crossover with the
//! repeaterless limit.

use repeaterlab::bounds::{lossy_lower_bound, lossy_regime};
use repeaterlab::envelope::{crossover_distance, CrossoverWindow, EnvelopeOptions};
use repeaterlab::params::presets;
use repeaterlab::LossModel;

fn main() -> repeaterlab::Result<()> {
    let window = CrossoverWindow::default();
    for db in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let hw = presets::hardware(1).with_switch_loss_db(db)?;
        let ch = presets::fiber(300.0);
        let (lb, c) = lossy_lower_bound(&ch, &hw)?;
        let regime = lossy_regime(&ch, &c);
        let crossover = crossover_distance(
            &presets::fiber(0.0),
            &hw,
            LossModel::SwitchLoss,
            &window,
            &EnvelopeOptions::default(),
        );
        println!(
            "{db:.1} dB: c_exp = {:.3}, c_sub = {:.3}, LB(300 km) = {lb:.3e}, {regime:?}, crossover {}",
            c.c_exp,
            c.c_sub,
            crossover.map_or("none".to_string(), |l| format!("{l:.1} km"))
        );
    }
    Ok(())
}
