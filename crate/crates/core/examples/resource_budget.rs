//! Latency, coherence time and memory register size a design needs.

use repeaterlab::model::resource_requirements;
use repeaterlab::params::presets;
use repeaterlab::RepeaterConfig;

fn main() -> repeaterlab::Result<()> {
    let hw = presets::hardware(1);
    println!(
        "{:>6} {:>3} {:>5} {:>12} {:>12} {:>7} {:>8}",
        "L km", "n", "m", "T_l us", "T_c us", "j", "N_mem"
    );
    for (l, n, m) in [(100.0, 4, 10), (200.0, 4, 10), (200.0, 9, 10), (400.0, 3, 1000)] {
        let r = resource_requirements(&presets::fiber(l), &hw, &RepeaterConfig::new(n, m)?);
        println!(
            "{l:>6} {n:>3} {m:>5} {:>12.3} {:>12.3} {:>7} {:>8}",
            r.t_latency_s * 1e6,
            r.t_coherence_min_s * 1e6,
            r.j_slots,
            r.n_mem_min
        );
    }
    Ok(())
}
