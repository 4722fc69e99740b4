//! Time evolution of the transmission from an empty cavity and a mirror at
//! rest, for a free and for a damped mirror.
//!
//! ```text
//! cargo run --release --example transmission_dynamics
//! ```

use optomech::dynamics::{integrate, IntegratorConfig};
use optomech::model::{MeanFieldState, SystemParams};
use optomech::steady;

fn main() -> optomech::Result<()> {
    let cfg = IntegratorConfig {
        t_final: 200.0,
        ..IntegratorConfig::default()
    };
    println!(
        "{:>5} {:>6} {:>10} {:>12} {:>24} {:>10}",
        "g", "gamma", "converged", "t_converged", "final T band", "steady T"
    );
    for (g, gamma) in [(0.1, 0.0), (0.2, 0.0), (0.4, 0.0), (0.5, 0.0), (0.5, 0.2)] {
        let params = SystemParams::default()
            .with_delta_c(1.0)
            .with_g(g)
            .with_gamma(gamma);
        let traj = integrate(&params, MeanFieldState::zero(), &cfg)?;
        let ss = steady::solve_steady(&params)?;
        let t_ss = steady::intensity_coefficients(&params, ss.x_selected).transmission;
        let (lo, hi) = traj.final_band.unwrap();
        println!(
            "{g:>5.1} {gamma:>6.1} {:>10} {:>12} {:>24} {t_ss:>10.6}",
            traj.converged,
            traj.t_converged.map_or("-".to_string(), |t| format!("{t:.1}")),
            format!("[{lo:.6}, {hi:.6}]"),
        );
    }
    Ok(())
}
