//! Time evolution of the mean-field equations with fixed-step RK4.

use std::collections::VecDeque;
use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::model::{rate, MeanFieldState, SystemParams};
use crate::ode::{rk4_step, step_count};
use crate::C64;

/// Photon numbers below `-NEGATIVE_N_TOL` abort an integration.
pub const NEGATIVE_N_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_final: f64,
    /// Record every `record_every`-th step (the final step is always kept).
    pub record_every: usize,
    /// Largest relative peak-to-peak spread of the transmission over
    /// `steady_window` that still counts as stationary.
    pub steady_tol: f64,
    pub steady_window: f64,
}

impl Default for IntegratorConfig {
    /// `dt = 1e-3`, `t_final = 100`, a window of ten periods at `omega_m = 1`.
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_final: 100.0,
            record_every: 100,
            steady_tol: 1e-6,
            steady_window: 10.0 * TAU,
        }
    }
}

impl IntegratorConfig {
    /// Sets the convergence window to `periods` mechanical periods.
    pub fn with_window_periods(mut self, omega_m: f64, periods: f64) -> Self {
        self.steady_window = periods * TAU / omega_m;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        };
        check("dt", self.dt)?;
        check("t_final", self.t_final)?;
        check("steady_tol", self.steady_tol)?;
        check("steady_window", self.steady_window)?;
        if self.record_every == 0 {
            return Err(Error::InvalidParameter {
                name: "record_every",
                reason: "must be >= 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: MeanFieldState,
    /// Instantaneous transmission; `None` for an undriven cavity.
    pub transmission: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// The final window passed the stationarity test.
    pub converged: bool,
    /// Start of the uninterrupted run of passing windows that lasts to the end.
    pub t_converged: Option<f64>,
    /// Minimum and maximum transmission over the last full window.
    pub final_band: Option<(f64, f64)>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }
}

/// Sliding-window minimum and maximum.
struct WindowExtrema {
    span: f64,
    max: VecDeque<(f64, f64)>,
    min: VecDeque<(f64, f64)>,
}

impl WindowExtrema {
    fn new(span: f64) -> Self {
        Self {
            span,
            max: VecDeque::new(),
            min: VecDeque::new(),
        }
    }

    fn push(&mut self, t: f64, v: f64) {
        while self.max.back().is_some_and(|&(_, b)| b <= v) {
            self.max.pop_back();
        }
        self.max.push_back((t, v));
        while self.min.back().is_some_and(|&(_, b)| b >= v) {
            self.min.pop_back();
        }
        self.min.push_back((t, v));
        let start = t - self.span;
        while self.max.front().is_some_and(|&(s, _)| s < start) {
            self.max.pop_front();
        }
        while self.min.front().is_some_and(|&(s, _)| s < start) {
            self.min.pop_front();
        }
    }

    fn extrema(&self) -> (f64, f64) {
        (self.min.front().unwrap().1, self.max.front().unwrap().1)
    }
}

/// Integrates the mean-field equations from `initial`.
///
/// Stationarity is judged on the photon number: the transmission is
/// proportional to it, so both have the same relative spread.
pub fn integrate(params: &SystemParams, initial: MeanFieldState, config: &IntegratorConfig) -> Result<Trajectory> {
    params.validate()?;
    config.validate()?;
    if !initial.is_finite() {
        return Err(Error::NonFinite { what: "initial state" });
    }
    let dt = config.dt;
    let steps = step_count(dt, config.t_final);
    let f = |_t: f64, s: MeanFieldState| rate(params, &s);
    let trace = |s: &MeanFieldState| transmission_trace(params, s).ok();

    let mut samples = Vec::with_capacity(steps / config.record_every + 2);
    samples.push(Sample {
        t: 0.0,
        state: initial,
        transmission: trace(&initial),
    });

    let mut window = WindowExtrema::new(config.steady_window);
    window.push(0.0, initial.n);
    let mut passing_since: Option<f64> = None;

    let mut state = initial;
    for k in 0..steps {
        state = rk4_step(&f, k as f64 * dt, state, dt);
        let t = (k + 1) as f64 * dt;
        if !state.is_finite() {
            return Err(Error::Diverged { t });
        }
        if state.n < -NEGATIVE_N_TOL {
            return Err(Error::NegativePhotonNumber { t, n: state.n });
        }

        window.push(t, state.n);
        if t >= config.steady_window {
            let (lo, hi) = window.extrema();
            let level = lo.abs().max(hi.abs());
            let spread = hi - lo;
            let passes = spread == 0.0 || spread < config.steady_tol * level;
            match (passes, passing_since) {
                (true, None) => passing_since = Some(t),
                (false, Some(_)) => passing_since = None,
                _ => {}
            }
        }

        if (k + 1) % config.record_every == 0 || k + 1 == steps {
            samples.push(Sample {
                t,
                state,
                transmission: trace(&state),
            });
        }
    }

    let covered = steps as f64 * dt >= config.steady_window;
    let final_band = if covered && params.drive_power() > 0.0 {
        let (lo, hi) = window.extrema();
        let scale = 2.0 * params.kappa2 / params.drive_power();
        Some((lo * scale, hi * scale))
    } else {
        None
    };

    Ok(Trajectory {
        samples,
        converged: passing_since.is_some(),
        t_converged: passing_since,
        final_band,
    })
}

/// Instantaneous intensity transmission `2 κ2 n / |α|²`.
pub fn transmission_trace(params: &SystemParams, state: &MeanFieldState) -> Result<f64> {
    let power = params.drive_power();
    if power == 0.0 {
        return Err(Error::ZeroDrive);
    }
    Ok(2.0 * params.kappa2 * state.n / power)
}

/// Instantaneous intensity reflection `|sqrt(2 κ1) a − α|² / |α|²`, treating
/// the intracavity field as coherent.
pub fn reflection_trace(params: &SystemParams, state: &MeanFieldState) -> Result<f64> {
    let power = params.drive_power();
    if power == 0.0 {
        return Err(Error::ZeroDrive);
    }
    let out = (2.0 * params.kappa1).sqrt() * state.a - params.alpha;
    Ok(out.norm_sqr() / power)
}

/// Exact field amplitude at time `t` for an uncoupled cavity that starts
/// empty: `sqrt(2κ1) α (1 − e^{−(κ + iΔc) t}) / (κ + iΔc)`.
pub fn closed_form_decoupled(params: &SystemParams, t: f64) -> C64 {
    let lambda = C64::new(params.kappa(), params.delta_c);
    (2.0 * params.kappa1).sqrt() * params.alpha * (1.0 - (-lambda * t).exp()) / lambda
}
