//! Seeded Monte Carlo of the block protocol against the exact rate.

use repeaterlab::model::end_to_end_rate;
use repeaterlab::params::presets;
use repeaterlab::sim::{simulate_rate, SimConfig};
use repeaterlab::{LossModel, RepeaterConfig};

fn main() -> repeaterlab::Result<()> {
    let sim = SimConfig::new(42, 1_000_000)?;
    let hw = presets::hardware(1)
        .with_switch_loss_db(0.3)?
        .with_memory_survival(0.995)?;
    for (l, n, m) in [(50.0, 1, 4), (100.0, 4, 10), (150.0, 3, 30)] {
        let ch = presets::fiber(l);
        let cfg = RepeaterConfig::new(n, m)?;
        for model in [LossModel::Ideal, LossModel::WorstDecoherence] {
            let analytic = end_to_end_rate(&ch, &hw, &cfg, model);
            let est = simulate_rate(&ch, &hw, &cfg, model, &sim)?;
            println!(
                "L = {l:>5}, n = {n}, m = {m:>2}, {model:>17}: MC {:>10.2} ± {:>7.2}  exact {analytic:>10.2}  z = {:+.2}",
                est.rate,
                est.std_error,
                est.z_score(analytic)
            );
        }
    }
    Ok(())
}
