//! Classical fixed-step fourth-order Runge-Kutta.

use std::ops::{Add, Mul};

use crate::C64;

pub(crate) trait OdeState: Copy {
    type Rate: Copy + Add<Output = Self::Rate> + Mul<f64, Output = Self::Rate>;

    /// `self + h * rate`
    fn advanced(self, h: f64, rate: Self::Rate) -> Self;
}

impl OdeState for C64 {
    type Rate = C64;

    fn advanced(self, h: f64, rate: C64) -> C64 {
        self + rate * h
    }
}

pub(crate) fn rk4_step<S, F>(f: &F, t: f64, y: S, dt: f64) -> S
where
    S: OdeState,
    F: Fn(f64, S) -> S::Rate,
{
    let half = 0.5 * dt;
    let k1 = f(t, y);
    let k2 = f(t + half, y.advanced(half, k1));
    let k3 = f(t + half, y.advanced(half, k2));
    let k4 = f(t + dt, y.advanced(dt, k3));
    y.advanced(dt / 6.0, k1 + k2 * 2.0 + k3 * 2.0 + k4)
}

/// Number of steps and the time of step `k`. Times are computed as `k * dt`
/// so they do not accumulate rounding drift.
pub(crate) fn step_count(dt: f64, t_final: f64) -> usize {
    (t_final / dt).round().max(1.0) as usize
}
