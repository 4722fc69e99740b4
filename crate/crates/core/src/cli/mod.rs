//! Command-line front end.
//!
//! ```text
//! optomech <mode> [--config FILE] [--key value ...] [--out FILE]
//! ```
//!
//! Modes and their CSV columns:
//!
//! | mode       | columns                                                   |
//! |------------|-----------------------------------------------------------|
//! | `steady`   | x, re_a, im_a, n, R, T, selected, bistable (one row per root) |
//! | `spectrum` | omega_L, delta_c, x_ss, re_r, im_r, re_t, im_t, R, T, bistable |
//! | `ratio`    | omega_L, T_g, T_0, ratio                                  |
//! | `dynamics` | t, re_a, im_a, n, x, p, T_inst                            |
//! | `perturb`  | g, residual_norm                                          |
//!
//! Exit codes: 0 on success, 1 for configuration errors, 2 for numeric
//! failures.

pub mod config;
pub mod csv;

use std::io::Write;
use std::path::PathBuf;

use thiserror::Error;

use crate::dynamics;
use crate::model::MeanFieldState;
use crate::perturbation;
use crate::steady;

pub use config::{parse_config, ConfigError, GridSpec, Mode, RunConfig};
pub use csv::{Cell, CsvTable};

pub const USAGE: &str = "usage: optomech <steady|spectrum|dynamics|ratio|perturb> [--config FILE] [--key value ...] [--out FILE]";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{mode}: {source}")]
    Numeric {
        mode: Mode,
        #[source]
        source: crate::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } => 1,
            CliError::Numeric { .. } => 2,
        }
    }
}

/// Parsed command line.
#[derive(Debug, Clone, PartialEq)]
pub struct Invocation {
    pub mode: Mode,
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub overrides: Vec<(String, String)>,
}

pub fn parse_args<I, S>(args: I) -> Result<Invocation, ConfigError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let mut args = args.into_iter().map(Into::into);
    let mode = match args.next() {
        None => return Err(ConfigError::Usage(USAGE.into())),
        Some(m) if m == "-h" || m == "--help" => return Err(ConfigError::Usage(USAGE.into())),
        Some(m) => m.parse::<Mode>()?,
    };
    let mut inv = Invocation {
        mode,
        config: None,
        out: None,
        overrides: Vec::new(),
    };
    while let Some(arg) = args.next() {
        let Some(flag) = arg.strip_prefix("--") else {
            return Err(ConfigError::Usage(format!("unexpected argument `{arg}`\n{USAGE}")));
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let v = args
                    .next()
                    .ok_or_else(|| ConfigError::Usage(format!("missing value for --{flag}")))?;
                (flag.to_string(), v)
            }
        };
        match key.as_str() {
            "config" => inv.config = Some(value.into()),
            "out" => inv.out = Some(value.into()),
            _ => inv.overrides.push((key, value)),
        }
    }
    Ok(inv)
}

fn numeric(mode: Mode) -> impl Fn(crate::Error) -> CliError {
    move |source| CliError::Numeric { mode, source }
}

fn drive_grid(cfg: &RunConfig) -> Result<Vec<f64>, CliError> {
    steady::drive_grid(cfg.grid.min, cfg.grid.max, cfg.grid.step).map_err(numeric(cfg.mode))
}

pub fn run_steady(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let p = &cfg.params;
    let ss = steady::solve_steady(p).map_err(numeric(Mode::Steady))?;
    let mut table = CsvTable::new(&["x", "re_a", "im_a", "n", "R", "T", "selected", "bistable"]);
    for root in &ss.roots {
        let a = steady::steady_amplitude(p, root.x);
        let c = steady::intensity_coefficients(p, root.x);
        table.push_row(vec![
            root.x.into(),
            a.re.into(),
            a.im.into(),
            a.norm_sqr().into(),
            c.reflection.into(),
            c.transmission.into(),
            (root.branch == steady::RootBranch::Selected).into(),
            ss.bistable.into(),
        ]);
    }
    if let Ok(c) = steady::cubic_coefficients(p) {
        table.push_footer(format!(
            "cubic c3,c2,c1,c0 = {},{},{},{}",
            csv::format_float(c.c3),
            csv::format_float(c.c2),
            csv::format_float(c.c1),
            csv::format_float(c.c0)
        ));
        let oracle = steady::steady_displacement_oracle(p);
        let roots = ss.root_values();
        if oracle.len() == roots.len() {
            let worst = roots
                .iter()
                .zip(&oracle)
                .map(|(a, b)| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            table.push_footer(format!("bisection max relative discrepancy = {}", csv::format_float(worst)));
        } else {
            table.push_footer(format!(
                "bisection found {} roots, closed form found {}",
                oracle.len(),
                roots.len()
            ));
        }
    }
    Ok(table)
}

pub fn run_spectrum(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let grid = drive_grid(cfg)?;
    let pts = steady::spectrum(&cfg.params, &grid, cfg.omega_c).map_err(numeric(Mode::Spectrum))?;
    let mut table = CsvTable::new(&[
        "omega_L", "delta_c", "x_ss", "re_r", "im_r", "re_t", "im_t", "R", "T", "bistable",
    ]);
    for p in pts {
        table.push_row(vec![
            p.omega_l.into(),
            p.delta_c.into(),
            p.x_ss.into(),
            p.r.re.into(),
            p.r.im.into(),
            p.t.re.into(),
            p.t.im.into(),
            p.reflection.into(),
            p.transmission.into(),
            p.bistable.into(),
        ]);
    }
    Ok(table)
}

pub fn run_ratio(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let grid = drive_grid(cfg)?;
    let pts = steady::transmission_ratio(&cfg.params, &grid, cfg.omega_c).map_err(numeric(Mode::Ratio))?;
    let mut table = CsvTable::new(&["omega_L", "T_g", "T_0", "ratio"]);
    for p in pts {
        table.push_row(vec![p.omega_l.into(), p.t_coupled.into(), p.t_uncoupled.into(), p.ratio.into()]);
    }
    Ok(table)
}

pub fn run_dynamics(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let p = &cfg.params;
    let traj = dynamics::integrate(p, MeanFieldState::zero(), &cfg.integrator).map_err(numeric(Mode::Dynamics))?;
    let mut table = CsvTable::new(&["t", "re_a", "im_a", "n", "x", "p", "T_inst"]);
    for s in &traj.samples {
        table.push_row(vec![
            s.t.into(),
            s.state.a.re.into(),
            s.state.a.im.into(),
            s.state.n.into(),
            s.state.x.into(),
            s.state.p.into(),
            s.transmission.unwrap_or(f64::NAN).into(),
        ]);
    }
    table.push_footer(format!("converged = {}", traj.converged as i32));
    if let Some(t) = traj.t_converged {
        table.push_footer(format!("t_converged = {}", csv::format_float(t)));
    }
    if let Some((lo, hi)) = traj.final_band {
        table.push_footer(format!(
            "final window T band = [{}, {}]",
            csv::format_float(lo),
            csv::format_float(hi)
        ));
    }
    if let Ok(ss) = steady::solve_steady(p) {
        let c = steady::intensity_coefficients(p, ss.x_selected);
        table.push_footer(format!(
            "steady x = {}, steady T = {}",
            csv::format_float(ss.x_selected),
            csv::format_float(c.transmission)
        ));
    }
    Ok(table)
}

pub fn run_perturb(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    let p = &cfg.params;
    let report = perturbation::scaling_check(p, &cfg.mirror, &cfg.g_list, &cfg.integrator)
        .map_err(numeric(Mode::Perturb))?;
    let mut table = CsvTable::new(&["g", "residual_norm"]);
    for &(g, r) in &report.residuals {
        table.push_row(vec![g.into(), r.into()]);
    }
    table.push_footer(format!("slope = {}", csv::format_float(report.slope)));
    for &g in &cfg.g_list {
        let pg = p.with_g(g);
        let dev = perturbation::adiabatic_deviation(&pg, &cfg.mirror, &cfg.integrator).map_err(numeric(Mode::Perturb))?;
        table.push_footer(format!(
            "g = {}: eta = {}, weak = {}, closed-form first-order max deviation = {}",
            csv::format_float(g),
            csv::format_float(perturbation::eta(&pg, &cfg.mirror)),
            perturbation::is_weak_coupling(&pg, &cfg.mirror) as i32,
            csv::format_float(dev)
        ));
    }
    Ok(table)
}

pub fn run(cfg: &RunConfig) -> Result<CsvTable, CliError> {
    match cfg.mode {
        Mode::Steady => run_steady(cfg),
        Mode::Spectrum => run_spectrum(cfg),
        Mode::Dynamics => run_dynamics(cfg),
        Mode::Ratio => run_ratio(cfg),
        Mode::Perturb => run_perturb(cfg),
    }
}

fn execute(inv: &Invocation) -> Result<String, CliError> {
    let contents = match &inv.config {
        Some(path) => std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?,
        None => String::new(),
    };
    let cfg = parse_config(inv.mode, &contents, &inv.overrides)?;
    Ok(run(&cfg)?.render())
}

/// Runs the command line (without the program name) and returns the exit
/// code. CSV goes to `--out` or stdout, diagnostics to stderr.
pub fn main_with_args<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let inv = match parse_args(args) {
        Ok(inv) => inv,
        Err(e) => {
            eprintln!("optomech: {e}");
            return 1;
        }
    };
    let result = execute(&inv).and_then(|csv| match &inv.out {
        Some(path) => std::fs::write(path, csv).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(csv.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("optomech: {e}");
            e.exit_code()
        }
    }
}
