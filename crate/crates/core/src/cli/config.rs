//! `key = value` run configuration.
//!
//! Lines are `key = value`; `#` starts a comment. Command-line overrides are
//! applied after the file, and keys that appear in neither take the defaults
//! of the selected mode.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dynamics::IntegratorConfig;
use crate::model::SystemParams;
use crate::perturbation::PrescribedMirror;
use crate::C64;

pub const KEYS: &[&str] = &[
    "m",
    "omega_m",
    "omega_c",
    "omega_l",
    "delta_c",
    "g",
    "kappa1",
    "kappa2",
    "gamma",
    "alpha_re",
    "alpha_im",
    "hbar",
    "dt",
    "t_final",
    "record_every",
    "steady_tol",
    "steady_window",
    "grid_min",
    "grid_max",
    "grid_step",
    "x0",
    "phi",
    "g_list",
];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("unknown key `{key}`")]
    UnknownKey { key: String },
    #[error("key `{key}` given twice in the config file")]
    Duplicate { key: String },
    #[error("key `{key}`: cannot parse `{value}` as a number")]
    Parse { key: String, value: String },
    #[error("key `{key}`: {reason}")]
    Invalid { key: String, reason: String },
    #[error("unknown mode `{0}` (expected steady, spectrum, dynamics, ratio or perturb)")]
    UnknownMode(String),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Steady,
    Spectrum,
    Dynamics,
    Ratio,
    Perturb,
}

impl FromStr for Mode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        match s {
            "steady" => Ok(Self::Steady),
            "spectrum" => Ok(Self::Spectrum),
            "dynamics" => Ok(Self::Dynamics),
            "ratio" => Ok(Self::Ratio),
            "perturb" => Ok(Self::Perturb),
            other => Err(ConfigError::UnknownMode(other.to_string())),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Steady => "steady",
            Self::Spectrum => "spectrum",
            Self::Dynamics => "dynamics",
            Self::Ratio => "ratio",
            Self::Perturb => "perturb",
        })
    }
}

/// Drive-frequency sweep `grid_min..=grid_max` in steps of `grid_step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub params: SystemParams,
    /// Cavity resonance for sweeps; `params.delta_c` is derived per point.
    pub omega_c: f64,
    pub grid: GridSpec,
    pub integrator: IntegratorConfig,
    pub mirror: PrescribedMirror,
    pub g_list: Vec<f64>,
}

/// Splits file contents into key/value pairs.
fn parse_lines(contents: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (idx, raw) in contents.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::Syntax {
                line: idx + 1,
                text: raw.to_string(),
            });
        };
        let key = key.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key });
        }
        if out.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(ConfigError::Duplicate { key });
        }
    }
    Ok(out)
}

struct Values(BTreeMap<String, String>);

impl Values {
    fn number(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.0
            .get(key)
            .map(|v| {
                v.parse::<f64>().map_err(|_| ConfigError::Parse {
                    key: key.to_string(),
                    value: v.clone(),
                })
            })
            .transpose()
    }

    fn number_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.number(key)?.unwrap_or(default))
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        reason: reason.into(),
    }
}

/// Builds a run configuration from file contents and `(key, value)` flag
/// overrides. Flags win over the file.
pub fn parse_config(mode: Mode, contents: &str, overrides: &[(String, String)]) -> Result<RunConfig, ConfigError> {
    let mut map = parse_lines(contents)?;
    for (key, value) in overrides {
        if !KEYS.contains(&key.as_str()) {
            return Err(ConfigError::UnknownKey { key: key.clone() });
        }
        map.insert(key.clone(), value.clone());
    }
    let v = Values(map);

    // Mode defaults: delta_c = 0, g = 0.1 for steady/spectrum, g = 0.3 for the
    // ratio sweep, and the dynamics set (delta_c = 1) for dynamics/perturb.
    let (default_g, default_delta) = match mode {
        Mode::Steady | Mode::Spectrum => (0.1, 0.0),
        Mode::Ratio => (0.3, 0.0),
        Mode::Dynamics | Mode::Perturb => (0.1, 1.0),
    };

    let omega_c = v.number_or("omega_c", 0.0)?;
    let delta_c = match (v.number("delta_c")?, v.number("omega_l")?) {
        (Some(_), Some(_)) => return Err(invalid("delta_c", "give either delta_c or omega_l, not both")),
        (Some(d), None) => d,
        (None, Some(wl)) => omega_c - wl,
        (None, None) => default_delta,
    };

    let params = SystemParams {
        m: v.number_or("m", 1.0)?,
        omega_m: v.number_or("omega_m", 1.0)?,
        delta_c,
        g: v.number_or("g", default_g)?,
        kappa1: v.number_or("kappa1", 0.5)?,
        kappa2: v.number_or("kappa2", 0.5)?,
        gamma: v.number_or("gamma", 0.0)?,
        alpha: C64::new(v.number_or("alpha_re", 1.0)?, v.number_or("alpha_im", 0.0)?),
        hbar: v.number_or("hbar", 1.0)?,
    };
    if let Err(crate::Error::InvalidParameter { name, reason }) = params.validate() {
        return Err(invalid(name, reason));
    }
    if !omega_c.is_finite() {
        return Err(invalid("omega_c", "must be finite"));
    }
    if matches!(mode, Mode::Spectrum | Mode::Ratio | Mode::Dynamics) && params.drive_power() == 0.0 {
        return Err(invalid("alpha_re", "this mode needs a nonzero drive amplitude"));
    }

    let grid = GridSpec {
        min: v.number_or("grid_min", -5.0)?,
        max: v.number_or("grid_max", 5.0)?,
        step: v.number_or("grid_step", 0.01)?,
    };
    if !(grid.step > 0.0) {
        return Err(invalid("grid_step", format!("must be > 0, got {}", grid.step)));
    }
    if !(grid.max >= grid.min) {
        return Err(invalid("grid_max", "must be >= grid_min"));
    }

    let record_every = match v.0.get("record_every") {
        None => {
            if mode == Mode::Perturb {
                10
            } else {
                100
            }
        }
        Some(s) => s.parse::<usize>().map_err(|_| ConfigError::Parse {
            key: "record_every".into(),
            value: s.clone(),
        })?,
    };
    let integrator = IntegratorConfig {
        dt: v.number_or("dt", 1e-3)?,
        t_final: v.number_or("t_final", 100.0)?,
        record_every,
        steady_tol: v.number_or("steady_tol", 1e-6)?,
        steady_window: v.number_or("steady_window", 10.0 * TAU / params.omega_m)?,
    };
    if let Err(crate::Error::InvalidParameter { name, reason }) = integrator.validate() {
        return Err(invalid(name, reason));
    }

    let mirror = PrescribedMirror::new(v.number_or("x0", 1.0)?, v.number_or("phi", 0.0)?).map_err(|e| match e {
        crate::Error::InvalidParameter { name, reason } => invalid(name, reason),
        other => invalid("x0", other.to_string()),
    })?;

    let g_list = match v.0.get("g_list") {
        None => vec![0.01, 0.02, 0.04],
        Some(s) => s
            .split(',')
            .map(|item| {
                item.trim().parse::<f64>().map_err(|_| ConfigError::Parse {
                    key: "g_list".into(),
                    value: s.clone(),
                })
            })
            .collect::<Result<_, _>>()?,
    };

    Ok(RunConfig {
        mode,
        params,
        omega_c,
        grid,
        integrator,
        mirror,
        g_list,
    })
}
