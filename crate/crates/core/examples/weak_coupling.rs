//! Expansion of the cavity amplitude in powers of the coupling for a mirror
//! forced onto a sinusoidal orbit.
//!
//! ```text
//! cargo run --release --example weak_coupling
//! ```

use optomech::dynamics::IntegratorConfig;
use optomech::model::SystemParams;
use optomech::perturbation::{self, PrescribedMirror};

fn main() -> optomech::Result<()> {
    let params = SystemParams::default().with_delta_c(1.0);
    let mirror = PrescribedMirror::new(1.0, 0.0)?;
    let cfg = IntegratorConfig {
        record_every: 10,
        ..IntegratorConfig::default()
    };

    let report = perturbation::scaling_check(&params, &mirror, &[0.01, 0.02, 0.04, 0.08], &cfg)?;
    for (g, r) in &report.residuals {
        println!("g = {g:<5} max |a - a0 - g a1| = {r:.3e}");
    }
    println!("log-log slope = {:.4}\n", report.slope);

    for g in [0.05, 0.1, 0.2, 0.4] {
        let p = params.with_g(g);
        let dev = perturbation::adiabatic_deviation(&p, &mirror, &cfg)?;
        println!(
            "g = {g:<4} eta = {:.3} weak = {:<5} adiabatic first-order formula off by {dev:.3e}",
            perturbation::eta(&p, &mirror),
            perturbation::is_weak_coupling(&p, &mirror),
        );
    }
    Ok(())
}
