use thiserror::Error;

/// Numerical and validation failures of the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("steady-state cubic is degenerate for g = 0")]
    DegenerateCubic,

    #[error("no cube-root branch gives an approximately real displacement (smallest relative imaginary part {residue:e})")]
    NoRealRoot { residue: f64 },

    #[error("photon number dropped to {n:e} at t = {t}")]
    NegativePhotonNumber { t: f64, n: f64 },

    #[error("state became non-finite at t = {t}")]
    Diverged { t: f64 },

    #[error("drive amplitude is zero, intensity coefficients are undefined")]
    ZeroDrive,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("at omega_L = {omega_l}: {source}")]
    AtDrive {
        omega_l: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at g = {g}: {source}")]
    AtCoupling {
        g: f64,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
