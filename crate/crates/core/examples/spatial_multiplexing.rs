//! Decay exponent of the purely spatially multiplexed (m = 1) envelope as the
//! channel count grows.

use repeaterlab::bounds::spatial_exponent_exact;
use repeaterlab::params::presets;

fn main() {
    println!("{:>6} {:>10} {:>10} {:>10}", "M", "s", "u", "z");
    for channels in [10, 20, 50, 100, 1000, 10_000] {
        let hw = presets::hardware(channels);
        match spatial_exponent_exact(&hw) {
            Ok(s) => println!(
                "{channels:>6} {:>10.5} {:>10} {:>10.3e}",
                s.s_exact,
                s.u_ub.map_or("-".to_string(), |u| format!("{u:.5}")),
                s.z_root
            ),
            Err(e) => println!("{channels:>6} {e}"),
        }
    }
}
