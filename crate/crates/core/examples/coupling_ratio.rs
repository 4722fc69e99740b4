//! Steady transmission with coupling relative to the uncoupled cavity.
//!
//! ```text
//! cargo run --example coupling_ratio
//! ```

use optomech::model::SystemParams;
use optomech::steady;

fn main() -> optomech::Result<()> {
    let grid = [-20.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 3.0, 20.0];
    print!("{:>6}", "g");
    for w in grid {
        print!(" {w:>9.1}");
    }
    println!("   <- omega_L (omega_c = 0)");
    for g in [0.1, 0.2, 0.3, 0.4] {
        let params = SystemParams::default().with_g(g);
        let ratio = steady::transmission_ratio(&params, &grid, 0.0)?;
        print!("{g:>6.1}");
        for r in ratio {
            print!(" {:>9.5}", r.ratio);
        }
        println!();
    }
    Ok(())
}
