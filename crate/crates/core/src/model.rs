//! Physical parameters, the mean-field state and its equations of motion.
//!
//! All quantities are in natural units. The cavity is driven through the
//! left mirror (decay rate `kappa1`) and transmits through the right mirror
//! (decay rate `kappa2`); the total field decay rate is `kappa1 + kappa2`.

use std::ops::{Add, Mul};

use crate::error::{Error, Result};
use crate::ode::OdeState;
use crate::C64;

/// Physical constants of one simulation instance.
///
/// `Default` is the symmetric cavity used throughout the examples:
/// `kappa1 = kappa2 = 0.5`, `m = omega_m = hbar = 1`, `gamma = 0`,
/// `alpha = 1`, `g = 0.1` and zero detuning.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Mirror mass.
    pub m: f64,
    /// Mechanical angular frequency.
    pub omega_m: f64,
    /// Cavity-drive detuning `omega_c - omega_L`.
    pub delta_c: f64,
    /// Optomechanical coupling strength.
    pub g: f64,
    /// Decay rate through the driven (left) mirror.
    pub kappa1: f64,
    /// Decay rate through the output (right) mirror.
    pub kappa2: f64,
    /// Mechanical damping coefficient. It enters the momentum equation as
    /// `-(gamma / m) p`, so it carries units of mass per time rather than
    /// those of a rate.
    pub gamma: f64,
    /// Complex drive amplitude.
    pub alpha: C64,
    pub hbar: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            omega_m: 1.0,
            delta_c: 0.0,
            g: 0.1,
            kappa1: 0.5,
            kappa2: 0.5,
            gamma: 0.0,
            alpha: C64::new(1.0, 0.0),
            hbar: 1.0,
        }
    }
}

fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

impl SystemParams {
    /// Total cavity-field decay rate.
    pub fn kappa(&self) -> f64 {
        self.kappa1 + self.kappa2
    }

    /// Drive power `|alpha|^2`.
    pub fn drive_power(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Mirror spring constant `m * omega_m^2`.
    pub fn stiffness(&self) -> f64 {
        self.m * self.omega_m * self.omega_m
    }

    pub fn with_delta_c(mut self, delta_c: f64) -> Self {
        self.delta_c = delta_c;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn with_alpha(mut self, alpha: C64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Checks every field against its physical range.
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("m", self.m),
            ("omega_m", self.omega_m),
            ("delta_c", self.delta_c),
            ("g", self.g),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma", self.gamma),
            ("alpha_re", self.alpha.re),
            ("alpha_im", self.alpha.im),
            ("hbar", self.hbar),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        for (name, v) in [("m", self.m), ("omega_m", self.omega_m), ("hbar", self.hbar)] {
            if v <= 0.0 {
                return Err(invalid(name, format!("must be > 0, got {v}")));
            }
        }
        for (name, v) in [
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("gamma", self.gamma),
        ] {
            if v < 0.0 {
                return Err(invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        if self.kappa() <= 0.0 {
            return Err(invalid("kappa2", "kappa1 + kappa2 must be > 0"));
        }
        Ok(())
    }
}

/// The evolving expectation values `⟨a⟩`, `⟨a†a⟩`, `⟨x⟩`, `⟨p⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MeanFieldState {
    /// Cavity field amplitude.
    pub a: C64,
    /// Photon number.
    pub n: f64,
    /// Mirror displacement.
    pub x: f64,
    /// Mirror momentum.
    pub p: f64,
}

impl MeanFieldState {
    /// Empty cavity with the mirror at rest at the origin.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Coherent-field state with `n = |a|^2`.
    pub fn coherent(a: C64, x: f64, p: f64) -> Self {
        Self {
            a,
            n: a.norm_sqr(),
            x,
            p,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.n.is_finite() && self.x.is_finite() && self.p.is_finite()
    }
}

/// Time derivatives of the [`MeanFieldState`] fields.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDerivative {
    pub da: C64,
    pub dn: f64,
    pub dx: f64,
    pub dp: f64,
}

impl StateDerivative {
    pub fn is_finite(&self) -> bool {
        self.da.is_finite() && self.dn.is_finite() && self.dx.is_finite() && self.dp.is_finite()
    }
}

impl Add for StateDerivative {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            da: self.da + rhs.da,
            dn: self.dn + rhs.dn,
            dx: self.dx + rhs.dx,
            dp: self.dp + rhs.dp,
        }
    }
}

impl Mul<f64> for StateDerivative {
    type Output = Self;

    fn mul(self, h: f64) -> Self {
        Self {
            da: self.da * h,
            dn: self.dn * h,
            dx: self.dx * h,
            dp: self.dp * h,
        }
    }
}

impl OdeState for MeanFieldState {
    type Rate = StateDerivative;

    fn advanced(self, h: f64, rate: StateDerivative) -> Self {
        Self {
            a: self.a + rate.da * h,
            n: self.n + rate.dn * h,
            x: self.x + rate.dx * h,
            p: self.p + rate.dp * h,
        }
    }
}

/// Right-hand side of the mean-field equations without input checks.
pub(crate) fn rate(params: &SystemParams, s: &MeanFieldState) -> StateDerivative {
    let i = C64::i();
    let kappa = params.kappa();
    let pump = (2.0 * params.kappa1).sqrt();
    let da = -i * params.delta_c * s.a + i * params.g * s.x * s.a + pump * params.alpha
        - kappa * s.a;
    // alpha a* + alpha* a = 2 Re(alpha a*)
    let dn = -2.0 * kappa * s.n + pump * 2.0 * (params.alpha * s.a.conj()).re;
    let dx = s.p / params.m;
    let dp = -params.stiffness() * s.x + params.hbar * params.g * s.n
        - (params.gamma / params.m) * s.p;
    StateDerivative { da, dn, dx, dp }
}

/// Evaluates the mean-field equations of motion at `state`.
///
/// The field equation uses the factorized product `⟨x⟩⟨a⟩`; the photon
/// number derivative is real-typed, so it has no imaginary part to drop.
pub fn derivative(params: &SystemParams, state: &MeanFieldState) -> Result<StateDerivative> {
    if !state.is_finite() {
        return Err(Error::NonFinite { what: "state" });
    }
    Ok(rate(params, state))
}

/// Radiation-pressure shifted detuning `delta_c - g x`.
pub fn effective_detuning(params: &SystemParams, x: f64) -> f64 {
    params.delta_c - params.g * x
}
