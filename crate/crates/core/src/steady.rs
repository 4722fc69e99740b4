//! Steady states and the reflection/transmission coefficients.
//!
//! Setting the time derivatives to zero gives `p = 0`, `n = |a|^2`,
//! `a = sqrt(2 kappa1) alpha / (kappa + i (delta_c - g x))` and the force
//! balance `m omega_m^2 x = hbar g n`. Eliminating `n` leaves a cubic in the
//! displacement:
//!
//! ```text
//! g² m ωm² x³ − 2 g Δc m ωm² x² + (κ² + Δc²) m ωm² x − 2 ħ g κ1 |α|² = 0
//! ```
//!
//! [`steady_displacement_analytic`] evaluates the closed-form radical
//! solution of this cubic; [`steady_displacement_oracle`] finds the same roots
//! by bracketing and bisection and shares no code with it.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{effective_detuning, SystemParams};
use crate::C64;

/// Imaginary parts below this (relative to the magnitude of the terms being
/// summed) are treated as roundoff in the radical formula.
pub const TOL_IMAG: f64 = 1e-9;

/// Coefficients of `c3 x³ + c2 x² + c1 x + c0` for the steady displacement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub c3: f64,
    pub c2: f64,
    pub c1: f64,
    pub c0: f64,
}

impl CubicCoefficients {
    pub fn eval(&self, x: f64) -> f64 {
        ((self.c3 * x + self.c2) * x + self.c1) * x + self.c0
    }

    pub fn max_abs(&self) -> f64 {
        self.c3
            .abs()
            .max(self.c2.abs())
            .max(self.c1.abs())
            .max(self.c0.abs())
    }

    /// Residual scale at `x`: the largest single term of the polynomial.
    pub fn residual_scale(&self, x: f64) -> f64 {
        let ax = x.abs();
        (self.c3.abs() * ax * ax * ax)
            .max(self.c2.abs() * ax * ax)
            .max(self.c1.abs() * ax)
            .max(self.c0.abs())
    }
}

pub fn cubic_coefficients(params: &SystemParams) -> Result<CubicCoefficients> {
    let g = params.g;
    if g == 0.0 {
        return Err(Error::DegenerateCubic);
    }
    let k = params.stiffness();
    let d = params.delta_c;
    let kappa = params.kappa();
    Ok(CubicCoefficients {
        c3: g * g * k,
        c2: -2.0 * g * d * k,
        c1: (kappa * kappa + d * d) * k,
        c0: -2.0 * params.hbar * g * params.kappa1 * params.drive_power(),
    })
}

/// Real roots of the displacement cubic from the closed-form radical solution
/// `x = X1 - X2 + X3`, sorted ascending.
///
/// With `M = m ωm²`:
///
/// ```text
/// X1 = 2Δc / 3g
/// X2 = 2^(1/3) m1 / (3 g² M (m2 + sqrt(4 m1³ + m2²))^(1/3))
/// X3 = (m2 + sqrt(4 m1³ + m2²))^(1/3) / (2^(1/3) 3 g² M)
/// m1 = 3 g² κ² M² − g² M² Δc²
/// m2 = 54 g⁵ M² ħ |α|² κ1 − 18 g³ κ² M³ Δc − 2 g³ M³ Δc³
/// ```
///
/// When `4 m1³ + m2² < 0` all three cube-root branches are real and are
/// evaluated in complex arithmetic. The sign of the square root is taken to
/// match `m2`, which swaps the roles of `X2` and `X3` and leaves the roots
/// unchanged.
pub fn steady_displacement_analytic(params: &SystemParams) -> Result<Vec<f64>> {
    let g = params.g;
    if g == 0.0 {
        return Err(Error::DegenerateCubic);
    }
    let k = params.stiffness();
    let d = params.delta_c;
    let kappa = params.kappa();
    let (g2, g3) = (g * g, g * g * g);
    let (k2, k3) = (k * k, k * k * k);

    let x1 = 2.0 * d / (3.0 * g);
    let m1 = 3.0 * g2 * kappa * kappa * k2 - g2 * k2 * d * d;
    let m2 = 54.0 * g3 * g2 * k2 * params.hbar * params.drive_power() * params.kappa1
        - 18.0 * g3 * kappa * kappa * k3 * d
        - 2.0 * g3 * k3 * d * d * d;
    let disc = 4.0 * m1 * m1 * m1 + m2 * m2;

    let cbrt2 = 2f64.cbrt();
    let denom = 3.0 * g2 * k;

    let w = if disc >= 0.0 {
        C64::new(m2 + disc.sqrt().copysign(m2), 0.0)
    } else {
        C64::new(m2, (-disc).sqrt())
    };
    if w.norm() == 0.0 {
        // m1 = m2 = 0: triple root
        return Ok(vec![x1]);
    }
    let principal = if disc >= 0.0 {
        C64::new(w.re.cbrt(), 0.0)
    } else {
        w.powf(1.0 / 3.0)
    };

    let branch = |c: C64| -> (f64, f64) {
        let x2 = cbrt2 * m1 / (denom * c);
        let x3 = c / (cbrt2 * denom);
        let x = C64::new(x1, 0.0) - x2 + x3;
        let scale = x1.abs().max(x2.norm()).max(x3.norm());
        (x.re, x.im.abs() / scale)
    };

    if disc > 0.0 {
        let (x, residue) = branch(principal);
        if residue > TOL_IMAG {
            return Err(Error::NoRealRoot { residue });
        }
        return Ok(vec![x]);
    }

    let mut roots = Vec::with_capacity(3);
    let mut smallest = f64::INFINITY;
    for j in 0..3 {
        let c = principal * C64::from_polar(1.0, 2.0 * PI * j as f64 / 3.0);
        let (x, residue) = branch(c);
        smallest = smallest.min(residue);
        if residue <= TOL_IMAG {
            roots.push(x);
        }
    }
    if roots.is_empty() {
        return Err(Error::NoRealRoot { residue: smallest });
    }
    roots.sort_by(f64::total_cmp);
    Ok(roots)
}

/// Bisects `poly` on `[lo, hi]` (opposite signs at the ends) down to
/// adjacent floating-point values.
fn bisect(poly: &CubicCoefficients, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = poly.eval(lo);
    if flo == 0.0 {
        return lo;
    }
    if poly.eval(hi) == 0.0 {
        return hi;
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = poly.eval(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Real roots of the displacement cubic by bracketing and bisection, sorted
/// ascending. Handles `g = 0` by returning the exact limit `[0]`.
///
/// The roots lie within the Cauchy bound `1 + max |c_i / c3|`. The critical
/// points of the cubic split that interval into monotone pieces, and every
/// piece whose ends differ in sign holds exactly one root.
pub fn steady_displacement_oracle(params: &SystemParams) -> Vec<f64> {
    let Ok(poly) = cubic_coefficients(params) else {
        return vec![0.0];
    };
    if poly.c0 == 0.0 {
        // x = 0 plus the roots of c3 x² + c2 x + c1
        let mut roots = vec![0.0];
        let disc = poly.c2 * poly.c2 - 4.0 * poly.c3 * poly.c1;
        if disc >= 0.0 {
            let q = -0.5 * (poly.c2 + disc.sqrt().copysign(poly.c2));
            roots.push(q / poly.c3);
            if q != 0.0 {
                roots.push(poly.c1 / q);
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        return roots;
    }

    let bound = 1.0
        + (poly.c2 / poly.c3)
            .abs()
            .max((poly.c1 / poly.c3).abs())
            .max((poly.c0 / poly.c3).abs());
    let mut knots = vec![-bound];
    // 3 c3 x² + 2 c2 x + c1 = 0
    let (qa, qb, qc) = (3.0 * poly.c3, 2.0 * poly.c2, poly.c1);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc > 0.0 {
        let q = -0.5 * (qb + disc.sqrt().copysign(qb));
        let mut crit = [q / qa, qc / q];
        crit.sort_by(f64::total_cmp);
        knots.extend(crit.iter().copied().filter(|c| c.abs() < bound));
    }
    knots.push(bound);

    let mut roots: Vec<f64> = Vec::with_capacity(3);
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (poly.eval(lo), poly.eval(hi));
        if flo == 0.0 || fhi == 0.0 || (flo < 0.0) != (fhi < 0.0) {
            let r = bisect(&poly, lo, hi);
            if roots.last() != Some(&r) {
                roots.push(r);
            }
        }
    }
    roots
}

/// Picks the root reached when the drive is ramped up from zero.
///
/// At zero drive the only real root is `x = 0`. The force balance
/// `m ωm² x (κ² + (Δc − g x)²) = 2 ħ g κ1 |α|²` has a left side that vanishes
/// only at the origin, so the branch growing out of `x = 0` stays the root of
/// smallest magnitude until it meets the fold, beyond which it is the only
/// root left. Following that branch therefore always ends on the root closest
/// to zero.
pub fn select_physical_root(roots: &[f64], _params: &SystemParams) -> Result<f64> {
    roots
        .iter()
        .copied()
        .min_by(|a, b| a.abs().total_cmp(&b.abs()))
        .ok_or(Error::NoRealRoot {
            residue: f64::INFINITY,
        })
}

/// Branch tag for a steady displacement root.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootBranch {
    /// Continuously connected to the undriven state.
    Selected,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyRoot {
    pub x: f64,
    pub branch: RootBranch,
}

/// A self-consistent fixed point of the mean-field equations.
#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    /// All real displacement roots, ascending.
    pub roots: Vec<SteadyRoot>,
    pub x_selected: f64,
    /// Cavity amplitude at `x_selected`.
    pub a_ss: C64,
    /// Photon number, `|a_ss|^2`.
    pub n_ss: f64,
    pub bistable: bool,
}

impl SteadyState {
    /// The steady momentum vanishes identically.
    pub fn p_ss(&self) -> f64 {
        0.0
    }

    pub fn root_values(&self) -> Vec<f64> {
        self.roots.iter().map(|r| r.x).collect()
    }
}

/// Solves for the steady state from the closed-form roots, falling back to
/// the bisection solver if the radical formula fails to produce a real root.
pub fn solve_steady(params: &SystemParams) -> Result<SteadyState> {
    params.validate()?;
    let xs = if params.g == 0.0 {
        vec![0.0]
    } else {
        steady_displacement_analytic(params).or_else(|_| {
            let r = steady_displacement_oracle(params);
            if r.is_empty() {
                Err(Error::NoRealRoot {
                    residue: f64::INFINITY,
                })
            } else {
                Ok(r)
            }
        })?
    };
    let x_selected = select_physical_root(&xs, params)?;
    let a_ss = steady_amplitude(params, x_selected);
    Ok(SteadyState {
        roots: xs
            .iter()
            .map(|&x| SteadyRoot {
                x,
                branch: if x == x_selected {
                    RootBranch::Selected
                } else {
                    RootBranch::Other
                },
            })
            .collect(),
        x_selected,
        a_ss,
        n_ss: a_ss.norm_sqr(),
        bistable: xs.len() > 1,
    })
}

/// Steady cavity amplitude for a given mirror displacement.
pub fn steady_amplitude(params: &SystemParams, x_ss: f64) -> C64 {
    let denom = C64::new(params.kappa(), effective_detuning(params, x_ss));
    (2.0 * params.kappa1).sqrt() * params.alpha / denom
}

/// Complex field reflection and transmission coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldCoefficients {
    pub r: C64,
    pub t: C64,
}

/// Intensity reflection and transmission coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntensityCoefficients {
    pub reflection: f64,
    pub transmission: f64,
}

pub fn field_coefficients(params: &SystemParams, x_ss: f64) -> FieldCoefficients {
    field_at(params.kappa1, params.kappa2, effective_detuning(params, x_ss))
}

/// Field coefficients for decay rates and an effective detuning.
pub fn field_at(kappa1: f64, kappa2: f64, delta_eff: f64) -> FieldCoefficients {
    let denom = C64::new(kappa1 + kappa2, delta_eff);
    FieldCoefficients {
        r: 2.0 * kappa1 / denom - 1.0,
        t: 2.0 * (kappa1 * kappa2).sqrt() / denom,
    }
}

pub fn intensity_coefficients(params: &SystemParams, x_ss: f64) -> IntensityCoefficients {
    intensity_at(params.kappa1, params.kappa2, effective_detuning(params, x_ss))
}

/// Intensity coefficients for decay rates and an effective detuning.
///
/// `R` is the expanded four-term form
/// `4κ1²/(κ²+Δ²) − 2κ1/(κ+iΔ) − 2κ1/(κ−iΔ) + 1`; see [`reflection_from_field`]
/// for the `|r|²` route.
pub fn intensity_at(kappa1: f64, kappa2: f64, delta_eff: f64) -> IntensityCoefficients {
    let kappa = kappa1 + kappa2;
    let lorentz = kappa * kappa + delta_eff * delta_eff;
    let cross = 2.0 * kappa1 / C64::new(kappa, delta_eff) + 2.0 * kappa1 / C64::new(kappa, -delta_eff);
    IntensityCoefficients {
        reflection: 4.0 * kappa1 * kappa1 / lorentz - cross.re + 1.0,
        transmission: 4.0 * kappa1 * kappa2 / lorentz,
    }
}

/// `|r|^2` from the complex field coefficient.
pub fn reflection_from_field(params: &SystemParams, x_ss: f64) -> f64 {
    field_coefficients(params, x_ss).r.norm_sqr()
}

/// One drive frequency of a spectrum sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub omega_l: f64,
    pub delta_c: f64,
    pub r: C64,
    pub t: C64,
    pub reflection: f64,
    pub transmission: f64,
    pub x_ss: f64,
    pub bistable: bool,
}

impl SpectrumPoint {
    pub fn delta_eff(&self, g: f64) -> f64 {
        self.delta_c - g * self.x_ss
    }
}

/// Evenly spaced drive frequencies `min, min + step, ...` up to `max`
/// (inclusive within a small fraction of a step).
pub fn drive_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidGrid(format!("step must be > 0, got {step}")));
    }
    if !(max >= min) || !min.is_finite() || !max.is_finite() {
        return Err(Error::InvalidGrid(format!("need min <= max, got [{min}, {max}]")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + i as f64 * step).collect())
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid("empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidGrid("not strictly increasing".into()));
    }
    Ok(())
}

/// Sweeps the drive frequency with the cavity resonance fixed at `omega_c`.
/// Points are solved in parallel and returned in grid order.
pub fn spectrum(template: &SystemParams, omega_l_grid: &[f64], omega_c: f64) -> Result<Vec<SpectrumPoint>> {
    check_grid(omega_l_grid)?;
    template.validate()?;
    omega_l_grid
        .par_iter()
        .map(|&omega_l| {
            let params = template.with_delta_c(omega_c - omega_l);
            let ss = solve_steady(&params).map_err(|e| Error::AtDrive {
                omega_l,
                source: Box::new(e),
            })?;
            let field = field_coefficients(&params, ss.x_selected);
            let intensity = intensity_coefficients(&params, ss.x_selected);
            Ok(SpectrumPoint {
                omega_l,
                delta_c: params.delta_c,
                r: field.r,
                t: field.t,
                reflection: intensity.reflection,
                transmission: intensity.transmission,
                x_ss: ss.x_selected,
                bistable: ss.bistable,
            })
        })
        .collect()
}

/// Transmission with coupling relative to the uncoupled cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioPoint {
    pub omega_l: f64,
    pub delta_c: f64,
    pub t_coupled: f64,
    pub t_uncoupled: f64,
    pub ratio: f64,
}

pub fn transmission_ratio(template: &SystemParams, omega_l_grid: &[f64], omega_c: f64) -> Result<Vec<RatioPoint>> {
    let points = spectrum(template, omega_l_grid, omega_c)?;
    Ok(points
        .into_iter()
        .map(|p| {
            let t0 = intensity_at(template.kappa1, template.kappa2, p.delta_c).transmission;
            RatioPoint {
                omega_l: p.omega_l,
                delta_c: p.delta_c,
                t_coupled: p.transmission,
                t_uncoupled: t0,
                ratio: p.transmission / t0,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    // Root of 0.01 x³ + x − 0.1, computed to 40 digits with an external solver.
    const REFERENCE_ROOT: f64 = 0.099_990_002_998_800_55;

    fn unit_cubic_instance() -> SystemParams {
        // cubic (1, -2, 2, -1) = (x - 1)(x² - x + 1)
        SystemParams::default().with_g(1.0).with_delta_c(1.0)
    }

    fn bistable_instance() -> SystemParams {
        // 0.01 x³ − 0.6 x² + 10 x − 40 = (x − 20)(x² − 40x + 200) / 100
        SystemParams::default()
            .with_delta_c(3.0)
            .with_alpha(C64::new(20.0, 0.0))
    }

    #[test]
    fn coefficients() {
        let c = cubic_coefficients(&SystemParams::default()).unwrap();
        assert_abs_diff_eq!(c.c3, 0.01, epsilon = 1e-15);
        assert_eq!(c.c2, 0.0);
        assert_eq!(c.c1, 1.0);
        assert_abs_diff_eq!(c.c0, -0.1, epsilon = 1e-15);

        let c = cubic_coefficients(&unit_cubic_instance()).unwrap();
        assert_eq!((c.c3, c.c2, c.c1, c.c0), (1.0, -2.0, 2.0, -1.0));
        assert_eq!(c.eval(1.0), 0.0);

        let c = cubic_coefficients(&SystemParams::default().with_alpha(C64::new(0.0, 0.0))).unwrap();
        assert_eq!(c.c0, 0.0);

        assert_eq!(
            cubic_coefficients(&SystemParams::default().with_g(0.0)),
            Err(Error::DegenerateCubic)
        );
    }

    #[test]
    fn analytic_single_root() {
        let roots = steady_displacement_analytic(&SystemParams::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], REFERENCE_ROOT, epsilon = 1e-12);

        let roots = steady_displacement_analytic(&unit_cubic_instance()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 1.0, epsilon = 1e-12);

        let undriven = SystemParams::default().with_alpha(C64::new(0.0, 0.0));
        let roots = steady_displacement_analytic(&undriven).unwrap();
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn analytic_three_roots() {
        let roots = steady_displacement_analytic(&bistable_instance()).unwrap();
        let expected = [20.0 - 10.0 * 2f64.sqrt(), 20.0, 20.0 + 10.0 * 2f64.sqrt()];
        assert_eq!(roots.len(), 3);
        for (r, e) in roots.iter().zip(expected) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-9 * e);
        }
    }

    #[test]
    fn oracle_roots() {
        let roots = steady_displacement_oracle(&SystemParams::default());
        assert_eq!(roots.len(), 1);
        assert_abs_diff_eq!(roots[0], REFERENCE_ROOT, epsilon = 1e-15);
        let c = cubic_coefficients(&SystemParams::default()).unwrap();
        assert!(c.eval(roots[0]).abs() < 1e-12);

        assert_eq!(
            steady_displacement_oracle(&SystemParams::default().with_alpha(C64::new(0.0, 0.0))),
            vec![0.0]
        );
        assert_eq!(steady_displacement_oracle(&SystemParams::default().with_g(0.0)), vec![0.0]);

        let roots = steady_displacement_oracle(&bistable_instance());
        assert_eq!(roots.len(), 3);
        assert_abs_diff_eq!(roots[1], 20.0, epsilon = 1e-12);
    }

    #[test]
    fn selection() {
        let p = SystemParams::default();
        assert_eq!(select_physical_root(&[REFERENCE_ROOT], &p).unwrap(), REFERENCE_ROOT);
        assert_eq!(select_physical_root(&[0.0], &p).unwrap(), 0.0);
        assert!(select_physical_root(&[], &p).is_err());

        let ss = solve_steady(&bistable_instance()).unwrap();
        assert!(ss.bistable);
        assert_abs_diff_eq!(ss.x_selected, 20.0 - 10.0 * 2f64.sqrt(), epsilon = 1e-9);
        assert_eq!(ss.roots[0].branch, RootBranch::Selected);
        assert_eq!(ss.roots[2].branch, RootBranch::Other);
    }

    /// Follows the root from zero drive by ramping the drive power and always
    /// taking the nearest root of the bisection solver.
    fn ramp_continuation(params: &SystemParams, steps: usize) -> f64 {
        let target = params.alpha;
        let mut x = 0.0;
        for k in 1..=steps {
            let scale = (k as f64 / steps as f64).sqrt();
            let roots = steady_displacement_oracle(&params.with_alpha(target * scale));
            x = roots
                .into_iter()
                .min_by(|a, b| (a - x).abs().total_cmp(&(b - x).abs()))
                .unwrap();
        }
        x
    }

    #[test]
    fn selection_matches_drive_ramp() {
        for (delta, amp, g) in [(3.0, 20.0, 0.1), (2.5, 18.0, 0.1), (4.0, 30.0, 0.1), (-3.0, 20.0, -0.1)] {
            let p = SystemParams::default()
                .with_delta_c(delta)
                .with_g(g)
                .with_alpha(C64::new(amp, 0.0));
            let ss = solve_steady(&p).unwrap();
            let ramp = ramp_continuation(&p, 4000);
            assert_abs_diff_eq!(ss.x_selected, ramp, epsilon = 1e-9 * ramp.abs().max(1.0));
        }
    }

    #[test]
    fn amplitude() {
        assert_eq!(steady_amplitude(&SystemParams::default(), 0.0), C64::new(1.0, 0.0));
        let p = SystemParams::default().with_g(0.0).with_delta_c(1.0);
        let a = steady_amplitude(&p, 0.0);
        assert_abs_diff_eq!(a.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(a.im, -0.5, epsilon = 1e-15);

        let a = steady_amplitude(&SystemParams::default(), REFERENCE_ROOT);
        assert_abs_diff_eq!(a.re, 0.999_900_029_988_005_5, epsilon = 1e-14);
        assert_abs_diff_eq!(a.im, 0.009_998_000_699_700_144, epsilon = 1e-14);
    }

    #[test]
    fn field_coefficient_examples() {
        let f = field_at(0.5, 0.5, 0.0);
        assert_eq!((f.t, f.r), (C64::new(1.0, 0.0), C64::new(0.0, 0.0)));
        let f = field_at(0.5, 0.0, 0.0);
        assert_eq!((f.t, f.r), (C64::new(0.0, 0.0), C64::new(1.0, 0.0)));
        let f = field_at(0.5, 0.5, 1.0);
        assert_abs_diff_eq!(f.t.re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.t.im, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.r.re, -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.r.im, -0.5, epsilon = 1e-15);
    }

    #[test]
    fn intensity_examples() {
        let c = intensity_at(0.5, 0.5, 0.0);
        assert_abs_diff_eq!(c.reflection, 0.0, epsilon = 1e-15);
        assert_eq!(c.transmission, 1.0);
        let c = intensity_at(0.5, 0.5, 1.0);
        assert_abs_diff_eq!(c.reflection, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(c.transmission, 0.5, epsilon = 1e-15);
        for d in [-3.0, 0.0, 0.7, 12.0] {
            let c = intensity_at(0.5, 0.0, d);
            assert_eq!(c.transmission, 0.0);
            assert_abs_diff_eq!(c.reflection, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn grid_validation() {
        let p = SystemParams::default();
        assert!(matches!(spectrum(&p, &[], 0.0), Err(Error::InvalidGrid(_))));
        assert!(matches!(spectrum(&p, &[1.0, 1.0], 0.0), Err(Error::InvalidGrid(_))));
        assert_eq!(drive_grid(-5.0, 5.0, 0.01).unwrap().len(), 1001);
        assert!(drive_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn solver_errors_carry_drive_frequency() {
        let p = SystemParams { kappa1: f64::NAN, ..SystemParams::default() };
        assert!(spectrum(&p, &[0.0], 0.0).is_err());
    }

    #[test]
    fn uncoupled_spectrum_is_lorentzian() {
        let p = SystemParams::default().with_g(0.0);
        let grid = drive_grid(-5.0, 5.0, 0.5).unwrap();
        for pt in spectrum(&p, &grid, 0.0).unwrap() {
            let lorentz = 1.0 / (1.0 + pt.delta_c * pt.delta_c);
            assert_abs_diff_eq!(pt.transmission, lorentz, epsilon = 1e-15);
            assert_eq!(pt.x_ss, 0.0);
        }
    }

    #[test]
    fn ratio_tends_to_one_far_from_resonance() {
        let p = SystemParams::default().with_g(0.3);
        let pts = transmission_ratio(&p, &[-20.0, -1.0, 1.0, 20.0], 0.0).unwrap();
        assert!((pts[0].ratio - 1.0).abs() < 0.01);
        assert!((pts[3].ratio - 1.0).abs() < 0.01);
        // omega_L = -1 is delta_c = +1
        assert!(pts[1].ratio > 1.0);
        assert!(pts[2].ratio < 1.0);
    }

    proptest! {
        #[test]
        fn unitarity(k1 in 0.0..2.0f64, k2 in 0.0..2.0f64, d in -10.0..10.0f64) {
            prop_assume!(k1 + k2 > 0.05);
            let c = intensity_at(k1, k2, d);
            prop_assert!((c.reflection + c.transmission - 1.0).abs() < 1e-12);
            prop_assert!(c.transmission >= 0.0 && c.reflection >= -1e-12);
            let f = field_at(k1, k2, d);
            prop_assert!((f.r.norm_sqr() - c.reflection).abs() < 1e-12);
        }

        #[test]
        fn analytic_matches_oracle(
            g in 0.01..1.0f64, d in -3.0..3.0f64,
            k1 in 0.1..1.0f64, k2 in 0.1..1.0f64, power in 0.1..4.0f64,
        ) {
            let p = SystemParams { g, delta_c: d, kappa1: k1, kappa2: k2,
                alpha: C64::new(power.sqrt(), 0.0), ..SystemParams::default() };
            let a = steady_displacement_analytic(&p).unwrap();
            let o = steady_displacement_oracle(&p);
            prop_assert_eq!(a.len(), o.len());
            for (x, y) in a.iter().zip(&o) {
                prop_assert!((x - y).abs() <= 1e-9 * y.abs());
            }
        }

        #[test]
        fn fixed_point_consistency(
            g in 0.01..1.0f64, d in -3.0..3.0f64,
            k1 in 0.1..1.0f64, k2 in 0.1..1.0f64, power in 0.1..4.0f64,
        ) {
            let p = SystemParams { g, delta_c: d, kappa1: k1, kappa2: k2,
                alpha: C64::new(power.sqrt(), 0.0), ..SystemParams::default() };
            let ss = solve_steady(&p).unwrap();
            let lhs = p.stiffness() * ss.x_selected;
            let rhs = p.hbar * p.g * ss.n_ss;
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs());
            prop_assert_eq!(ss.n_ss, ss.a_ss.norm_sqr());
        }
    }
}
