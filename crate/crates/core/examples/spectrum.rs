//! Reflection and transmission of the driven cavity as the drive frequency
//! is swept across resonance.
//!
//! ```text
//! cargo run --example spectrum
//! ```

use optomech::model::SystemParams;
use optomech::steady;

fn main() -> optomech::Result<()> {
    let params = SystemParams::default();
    let grid = steady::drive_grid(-5.0, 5.0, 0.01)?;
    let points = steady::spectrum(&params, &grid, 0.0)?;

    let peak = points
        .iter()
        .max_by(|a, b| a.transmission.total_cmp(&b.transmission))
        .unwrap();
    println!(
        "peak T = {:.9} at omega_L = {:+.2} (x_ss = {:.6}, effective detuning {:+.2e})",
        peak.transmission,
        peak.omega_l,
        peak.x_ss,
        peak.delta_eff(params.g)
    );

    let worst = points
        .iter()
        .map(|p| (p.reflection + p.transmission - 1.0).abs())
        .fold(0.0, f64::max);
    println!("max |R + T - 1| over {} points = {worst:.2e}", points.len());

    println!("\n{:>8} {:>10} {:>10} {:>10}", "omega_L", "x_ss", "R", "T");
    for p in points.iter().step_by(50) {
        println!("{:>8.2} {:>10.6} {:>10.6} {:>10.6}", p.omega_l, p.x_ss, p.reflection, p.transmission);
    }
    Ok(())
}
