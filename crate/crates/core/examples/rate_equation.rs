//! Exact end-to-end rate of one repeater design under each loss model.

use repeaterlab::model::{derived_probabilities, end_to_end_rate, plob_rate};
use repeaterlab::params::presets;
use repeaterlab::{LossModel, RepeaterConfig};

fn main() -> repeaterlab::Result<()> {
    let ch = presets::fiber(100.0);
    let hw = presets::hardware(1)
        .with_switch_loss_db(0.5)?
        .with_memory_survival(0.999)?;
    let cfg = RepeaterConfig::new(4, 10)?;

    println!(
        "L = {} km, n = {}, m = {}, M = {}",
        ch.length_km, cfg.n, cfg.m, hw.channels
    );
    for model in [LossModel::Ideal, LossModel::SwitchLoss, LossModel::WorstDecoherence] {
        let d = derived_probabilities(&ch, &hw, &cfg, model);
        println!(
            "{model:>18}: p = {:.5}  P = {:.5}  q_eff = {:.5}  R = {:.2} ebits/s",
            d.p_attempt,
            d.p_link,
            d.q_eff,
            end_to_end_rate(&ch, &hw, &cfg, model)
        );
    }
    println!("{:>18}: {:.2} ebits/s", "repeaterless", plob_rate(&ch, &hw));
    Ok(())
}
