//! Mean-field simulation of a coherently driven optical cavity with one
//! movable end mirror.
//!
//! The cavity field and the mirror interact through radiation pressure. The
//! crate works with the four expectation values `⟨a⟩`, `⟨a†a⟩`, `⟨x⟩`, `⟨p⟩`
//! under the factorization `⟨x a⟩ = ⟨x⟩⟨a⟩` and provides:
//!
//! * [`model`]: parameters, state and the equations of motion,
//! * [`steady`]: self-consistent steady states (closed-form cubic roots and an
//!   independent bisection solver), reflection/transmission coefficients and
//!   drive-frequency sweeps,
//! * [`dynamics`]: fixed-step RK4 time evolution with a steady-state detector,
//! * [`perturbation`]: the expansion of the cavity amplitude in powers of the
//!   coupling for a mirror on a prescribed sinusoidal orbit,
//! * [`cli`]: the `optomech` command-line front end and its CSV output.
//!
//! ```
//! use optomech::model::SystemParams;
//! use optomech::steady;
//!
//! let params = SystemParams::default();
//! let ss = steady::solve_steady(&params).unwrap();
//! let coeffs = steady::intensity_coefficients(&params, ss.x_selected);
//! assert!((coeffs.reflection + coeffs.transmission - 1.0).abs() < 1e-12);
//! ```

// `!(x > 0.0)` style checks are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod model;
mod ode;
pub mod perturbation;
pub mod steady;

pub use error::{Error, Result};
pub use model::{MeanFieldState, StateDerivative, SystemParams};

/// Complex scalar used for field amplitudes.
pub type C64 = num_complex::Complex64;
