//! Lower bound under worst-case memory decay for several memory qualities.

use repeaterlab::bounds::decoherence_lower_bound;
use repeaterlab::model::plob_rate;
use repeaterlab::params::presets;

fn main() -> repeaterlab::Result<()> {
    let lengths = [100.0, 200.0, 400.0, 600.0];
    print!("{:>10}", "lambda_mem");
    for l in lengths {
        print!(" {:>14}", format!("{l} km"));
    }
    println!();
    for mem in [1.0, 0.9999, 0.999, 0.99] {
        let hw = presets::hardware(1).with_memory_survival(mem)?;
        print!("{mem:>10}");
        for l in lengths {
            let s = decoherence_lower_bound(&presets::fiber(l), &hw)?;
            print!(" {:>14.4e}", s.rate_lb);
        }
        println!();
    }
    print!("{:>10}", "direct");
    for l in lengths {
        print!(" {:>14.4e}", plob_rate(&presets::fiber(l), &presets::hardware(1)));
    }
    println!();
    Ok(())
}
