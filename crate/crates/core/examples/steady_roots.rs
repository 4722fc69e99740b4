//! Steady mirror displacement from the closed-form cubic roots, checked
//! against bisection, including a bistable operating point.
//!
//! ```text
//! cargo run --example steady_roots
//! ```

use optomech::model::SystemParams;
use optomech::steady;
use optomech::C64;

fn report(label: &str, params: &SystemParams) -> optomech::Result<()> {
    let c = steady::cubic_coefficients(params)?;
    let closed = steady::steady_displacement_analytic(params)?;
    let bisected = steady::steady_displacement_oracle(params);
    let ss = steady::solve_steady(params)?;
    println!("{label}");
    println!("  cubic: {:.4} x^3 + {:.4} x^2 + {:.4} x + {:.4}", c.c3, c.c2, c.c1, c.c0);
    println!("  closed form: {closed:?}");
    println!("  bisection:   {bisected:?}");
    println!(
        "  selected x = {:.12}, n = {:.9}, bistable = {}",
        ss.x_selected, ss.n_ss, ss.bistable
    );
    let force = params.stiffness() * ss.x_selected - params.hbar * params.g * ss.n_ss;
    println!("  force balance residual = {force:.2e}\n");
    Ok(())
}

fn main() -> optomech::Result<()> {
    report("weak drive on resonance", &SystemParams::default())?;
    report(
        "strong drive, delta_c = 3 (three branches)",
        &SystemParams::default()
            .with_delta_c(3.0)
            .with_alpha(C64::new(20.0, 0.0)),
    )?;

    println!("sweeping the drive power at delta_c = 3:");
    for amp in [10.0, 16.0, 17.0, 20.0, 22.0, 24.0, 25.0, 30.0] {
        let p = SystemParams::default()
            .with_delta_c(3.0)
            .with_alpha(C64::new(amp, 0.0));
        let ss = steady::solve_steady(&p)?;
        println!("  |alpha|^2 = {:>5.0}: roots {:?}", amp * amp, ss.root_values());
    }
    Ok(())
}
