//! Weak-coupling expansion of the cavity amplitude.
//!
//! Dropping radiation pressure from the mirror equation leaves a free
//! oscillation `x(t) = x0 sin(ωm t + φ)`. Inserting it in the field equation
//! gives a linear ODE with a time-dependent detuning, whose solution is
//! expanded as `a(g, t) = a0(t) + g a1(t) + O(g²)` with
//!
//! ```text
//! a0' = −(κ + iΔc) a0 + sqrt(2κ1) α
//! a1' = −(κ + iΔc) a1 + i a0 x0 sin(ωm t + φ)
//! ```
//!
//! and both orders starting from zero.

use std::ops::{Add, Mul};

use rayon::prelude::*;

use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::ode::{rk4_step, step_count, OdeState};
use crate::C64;

/// Largest `eta` still flagged as weak coupling.
pub const WEAK_COUPLING_THRESHOLD: f64 = 0.1;

/// A mirror forced onto `x(t) = x0 sin(omega_m t + phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrescribedMirror {
    pub x0: f64,
    pub phi: f64,
}

impl Default for PrescribedMirror {
    fn default() -> Self {
        Self { x0: 1.0, phi: 0.0 }
    }
}

impl PrescribedMirror {
    pub fn new(x0: f64, phi: f64) -> Result<Self> {
        if !(x0 >= 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter {
                name: "x0",
                reason: format!("must be finite and >= 0, got {x0}"),
            });
        }
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                reason: "must be finite".into(),
            });
        }
        Ok(Self { x0, phi })
    }

    pub fn position(&self, omega_m: f64, t: f64) -> f64 {
        self.x0 * (omega_m * t + self.phi).sin()
    }
}

/// Weak-coupling parameter `g x0 / (2 ωm)`.
pub fn eta(params: &SystemParams, mirror: &PrescribedMirror) -> f64 {
    params.g.abs() * mirror.x0 / (2.0 * params.omega_m)
}

pub fn is_weak_coupling(params: &SystemParams, mirror: &PrescribedMirror) -> bool {
    eta(params, mirror) <= WEAK_COUPLING_THRESHOLD
}

/// Sampled complex amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeTrace {
    pub times: Vec<f64>,
    pub values: Vec<C64>,
}

/// Zeroth- and first-order terms of the expansion on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionResult {
    pub times: Vec<f64>,
    pub a0_trace: Vec<C64>,
    /// Coefficient of `g`; independent of `params.g`.
    pub a1_trace: Vec<C64>,
    pub eta: f64,
    pub weak: bool,
}

fn check_finite(t: f64, v: C64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Diverged { t })
    }
}

/// Integrates a single complex amplitude from zero and records it.
fn integrate_amplitude<S, F>(config: &IntegratorConfig, initial: S, f: F, mut value: impl FnMut(&S) -> C64) -> Result<(Vec<f64>, Vec<S>)>
where
    S: OdeState,
    F: Fn(f64, S) -> S::Rate,
{
    config.validate()?;
    let dt = config.dt;
    let steps = step_count(dt, config.t_final);
    let mut times = Vec::with_capacity(steps / config.record_every + 2);
    let mut states = Vec::with_capacity(times.capacity());
    times.push(0.0);
    states.push(initial);
    let mut y = initial;
    for k in 0..steps {
        y = rk4_step(&f, k as f64 * dt, y, dt);
        let t = (k + 1) as f64 * dt;
        check_finite(t, value(&y))?;
        if (k + 1) % config.record_every == 0 || k + 1 == steps {
            times.push(t);
            states.push(y);
        }
    }
    Ok((times, states))
}

/// Integrates the cavity amplitude with the mirror on its prescribed orbit,
/// starting from an empty cavity.
pub fn integrate_prescribed(params: &SystemParams, mirror: &PrescribedMirror, config: &IntegratorConfig) -> Result<AmplitudeTrace> {
    params.validate()?;
    let i = C64::i();
    let kappa = params.kappa();
    let pump = (2.0 * params.kappa1).sqrt() * params.alpha;
    let f = |t: f64, a: C64| {
        let x = mirror.position(params.omega_m, t);
        -i * params.delta_c * a + i * params.g * x * a + pump - kappa * a
    };
    let (times, values) = integrate_amplitude(config, C64::new(0.0, 0.0), f, |a| *a)?;
    Ok(AmplitudeTrace { times, values })
}

#[derive(Debug, Clone, Copy)]
struct Orders {
    zeroth: C64,
    first: C64,
}

impl Add for Orders {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            zeroth: self.zeroth + rhs.zeroth,
            first: self.first + rhs.first,
        }
    }
}

impl Mul<f64> for Orders {
    type Output = Self;

    fn mul(self, h: f64) -> Self {
        Self {
            zeroth: self.zeroth * h,
            first: self.first * h,
        }
    }
}

impl OdeState for Orders {
    type Rate = Orders;

    fn advanced(self, h: f64, rate: Orders) -> Self {
        self + rate * h
    }
}

/// Integrates the zeroth- and first-order equations together; the first order
/// is driven by the zeroth at every RK4 stage. `params.g` is never read.
pub fn first_order_coefficient(params: &SystemParams, mirror: &PrescribedMirror, config: &IntegratorConfig) -> Result<ExpansionResult> {
    params.validate()?;
    let i = C64::i();
    let decay = C64::new(params.kappa(), params.delta_c);
    let pump = (2.0 * params.kappa1).sqrt() * params.alpha;
    let f = |t: f64, y: Orders| Orders {
        zeroth: -decay * y.zeroth + pump,
        first: -decay * y.first + i * y.zeroth * mirror.position(params.omega_m, t),
    };
    let zero = C64::new(0.0, 0.0);
    let (times, states) = integrate_amplitude(
        config,
        Orders { zeroth: zero, first: zero },
        f,
        |y| y.zeroth + y.first,
    )?;
    Ok(ExpansionResult {
        times,
        a0_trace: states.iter().map(|s| s.zeroth).collect(),
        a1_trace: states.iter().map(|s| s.first).collect(),
        eta: eta(params, mirror),
        weak: is_weak_coupling(params, mirror),
    })
}

/// Closed-form first-order amplitude `a0 (1 + η sin(ωm t + φ))`.
///
/// This drops the sideband denominators `κ + i(Δc ∓ ωm)` of the exact
/// first-order solution, so it is only a comparison formula.
pub fn adiabatic_first_order(params: &SystemParams, mirror: &PrescribedMirror, a0: C64, t: f64) -> C64 {
    let eta = params.g * mirror.x0 / (2.0 * params.omega_m);
    a0 + eta * a0 * (params.omega_m * t + mirror.phi).sin()
}

/// Largest deviation of the closed form from the integrated amplitude.
pub fn adiabatic_deviation(params: &SystemParams, mirror: &PrescribedMirror, config: &IntegratorConfig) -> Result<f64> {
    let full = integrate_prescribed(params, mirror, config)?;
    let expansion = first_order_coefficient(params, mirror, config)?;
    Ok(full
        .times
        .iter()
        .zip(&full.values)
        .zip(&expansion.a0_trace)
        .map(|((&t, &a), &a0)| (a - adiabatic_first_order(params, mirror, a0, t)).norm())
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    /// `(g, max_t |a(g, t) − a0(t) − g a1(t)|)` in input order.
    pub residuals: Vec<(f64, f64)>,
    /// Least-squares slope of `ln residual` against `ln g`.
    pub slope: f64,
}

/// Residuals below this multiple of the zeroth-order scale are roundoff.
const RESIDUAL_FLOOR: f64 = 1e-12;

/// Measures how the remainder after the first-order term scales with `g`.
pub fn scaling_check(params: &SystemParams, mirror: &PrescribedMirror, g_list: &[f64], config: &IntegratorConfig) -> Result<ScalingReport> {
    if g_list.iter().all(|&g| g == 0.0) {
        return Err(Error::DegenerateFit("all couplings are zero".into()));
    }
    if g_list.len() < 3 {
        return Err(Error::InvalidParameter {
            name: "g_list",
            reason: format!("need at least 3 couplings, got {}", g_list.len()),
        });
    }
    if g_list.iter().any(|&g| g == 0.0 || !g.is_finite()) {
        return Err(Error::DegenerateFit("couplings must be finite and nonzero".into()));
    }
    let (lo, hi) = g_list
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), g| (lo.min(g.abs()), hi.max(g.abs())));
    if hi < 4.0 * lo {
        return Err(Error::InvalidParameter {
            name: "g_list",
            reason: format!("couplings must span a factor of 4, got [{lo}, {hi}]"),
        });
    }

    let expansion = first_order_coefficient(params, mirror, config)?;
    let scale = expansion.a0_trace.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let residuals: Vec<(f64, f64)> = g_list
        .par_iter()
        .map(|&g| {
            let trace = integrate_prescribed(&params.with_g(g), mirror, config).map_err(|e| Error::AtCoupling {
                g,
                source: Box::new(e),
            })?;
            let r = trace
                .values
                .iter()
                .zip(expansion.a0_trace.iter().zip(&expansion.a1_trace))
                .map(|(&a, (&a0, &a1))| (a - a0 - g * a1).norm())
                .fold(0.0, f64::max);
            Ok((g, r))
        })
        .collect::<Result<_>>()?;

    if let Some(&(g, r)) = residuals.iter().find(|&&(_, r)| r <= RESIDUAL_FLOOR * scale.max(1.0)) {
        return Err(Error::DegenerateFit(format!(
            "residual {r:e} at g = {g} is at the numeric floor"
        )));
    }

    let pts: Vec<(f64, f64)> = residuals.iter().map(|&(g, r)| (g.abs().ln(), r.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(ScalingReport {
        residuals,
        slope: sxy / sxx,
    })
}
