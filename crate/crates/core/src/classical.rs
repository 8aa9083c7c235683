//! Classical steady-state amplitudes of the driven system.
//!
//! In steady state the photon and phonon amplitudes are explicit in the
//! magnon amplitude `ε`:
//!
//! ```text
//! α = -i g_am ε / (iΔc + κa/2)
//! β = -i g_bm |ε|² / (iω_b + γb/2)
//! ```
//!
//! and the phonon displacement shifts the magnon detuning,
//! `Δm = Δm' + g_bm (β + β*) = Δm' - K |ε|²` with
//! `K = 2 g_bm² ω_b / (ω_b² + γb²/4)`. Substituting into the magnon equation
//! and taking the modulus squared leaves a real cubic in `x = |ε|²`:
//!
//! ```text
//! x [P² + (s - K x)²] = Ω²,
//! P = κm/2 + g_am² (κa/2) / (Δc² + κa²/4),
//! s = Δm' - g_am² Δc / (Δc² + κa²/4).
//! ```
//!
//! Every real root is positive when `Ω ≠ 0`, and each one is a classical
//! branch; three roots mark the bistable region.

use num_complex::Complex64;

use crate::dynamics::{drift_matrix, is_stable};
use crate::error::{Error, Result};
use crate::model::{DriveParams, SystemParams, FE3_SPIN};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalFixedPoint {
    pub alpha: Complex64,
    pub epsilon: Complex64,
    pub beta: Complex64,
    /// Magnon detuning including the mechanical shift.
    pub delta_m_eff: f64,
    /// `|g_bm ε|`: the enhanced coupling after rotating ε real.
    pub g_bm_enhanced: f64,
    /// `arg ε`, removed by the phase rotation that makes the coupling real.
    pub coupling_phase: f64,
    /// Number of classical branches at this parameter point.
    pub branch_count: usize,
    /// Largest modulus of the steady-state equations at the solution.
    pub residual: f64,
    /// Linear stability of the fluctuations around this branch.
    pub stable: bool,
}

impl ClassicalFixedPoint {
    pub fn magnon_number(&self) -> f64 {
        self.epsilon.norm_sqr()
    }

    /// Parameters for the fluctuation analysis around this branch.
    pub fn operating_params(&self, base: &SystemParams) -> SystemParams {
        SystemParams {
            delta_m: self.delta_m_eff,
            g_bm_enhanced: self.g_bm_enhanced,
            ..base.clone()
        }
    }
}

/// Coefficients of `x [P² + (s - K x)²] - Ω²`, plus the pieces used to
/// rebuild the amplitudes.
#[derive(Debug, Clone, Copy)]
pub(crate) struct MagnonCubic {
    pub p: f64,
    pub s: f64,
    pub k: f64,
    pub omega_sq: f64,
}

impl MagnonCubic {
    pub(crate) fn new(params: &SystemParams, g_bm: f64, omega_drive: f64) -> Self {
        let den = params.delta_c * params.delta_c + params.kappa_a * params.kappa_a / 4.0;
        let g2 = params.g_am * params.g_am;
        let wb = params.omega_b;
        Self {
            p: params.kappa_m / 2.0 + g2 * params.kappa_a / 2.0 / den,
            s: params.delta_m - g2 * params.delta_c / den,
            k: 2.0 * g_bm * g_bm * wb / (wb * wb + params.gamma_b * params.gamma_b / 4.0),
            omega_sq: omega_drive * omega_drive,
        }
    }

    /// Coefficients `[c0, c1, c2, c3]` in ascending powers of `x`.
    pub(crate) fn coefficients(&self) -> [f64; 4] {
        [
            -self.omega_sq,
            self.p * self.p + self.s * self.s,
            -2.0 * self.k * self.s,
            self.k * self.k,
        ]
    }

    /// All real roots, ascending, distinct.
    fn roots(&self) -> Result<Vec<f64>> {
        if self.omega_sq == 0.0 {
            return Ok(vec![0.0]);
        }
        let [c0, c1, c2, c3] = self.coefficients();
        // Scale x by the linear-response estimate so that f(y) = a y³ + b y² + y - 1.
        let x0 = -c0 / c1;
        let a = c3 * x0 * x0 * x0 / -c0;
        let b = c2 * x0 * x0 / -c0;
        let scaled = [-1.0, 1.0, b, a];
        let ys = positive_cubic_roots(scaled)?;
        Ok(ys.into_iter().map(|y| y * x0).collect())
    }
}

fn eval(c: &[f64; 4], y: f64) -> f64 {
    ((c[3] * y + c[2]) * y + c[1]) * y + c[0]
}

fn eval_deriv(c: &[f64; 4], y: f64) -> f64 {
    (3.0 * c[3] * y + 2.0 * c[2]) * y + c[1]
}

/// Real roots of `c3 y³ + c2 y² + c1 y + c0` with `c0 < 0 < c1`, `c3 >= 0`,
/// bracketed between the critical points.
fn positive_cubic_roots(c: [f64; 4]) -> Result<Vec<f64>> {
    let mut breaks = vec![0.0];
    if c[3] > 0.0 {
        // 3 c3 y² + 2 c2 y + c1 = 0
        let (qa, qb, qc) = (3.0 * c[3], 2.0 * c[2], c[1]);
        let disc = qb * qb - 4.0 * qa * qc;
        if disc > 0.0 {
            let t = -0.5 * (qb + qb.signum() * disc.sqrt());
            let mut crit = [t / qa, qc / t];
            crit.sort_by(f64::total_cmp);
            breaks.extend(crit.into_iter().filter(|y| *y > 0.0));
        }
    }
    let last = *breaks.last().unwrap();
    let mut hi = last.max(1.0);
    let mut guard = 0;
    while eval(&c, hi) <= 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Numerical(
                "no upper bracket for the magnon cubic".into(),
            ));
        }
    }
    breaks.push(hi);

    let mut roots: Vec<f64> = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (eval(&c, lo), eval(&c, hi));
        let root = if flo == 0.0 {
            Some(lo)
        } else if fhi == 0.0 {
            Some(hi)
        } else if flo.signum() != fhi.signum() {
            Some(safe_newton(&c, lo, hi))
        } else {
            None
        };
        if let Some(r) = root {
            let dup = roots
                .last()
                .is_some_and(|&prev| (r - prev).abs() <= 1e-12 * r.abs().max(1e-300));
            if !dup {
                roots.push(r);
            }
        }
    }
    if roots.is_empty() {
        return Err(Error::Numerical(
            "magnon cubic has no real non-negative root".into(),
        ));
    }
    Ok(roots)
}

/// Newton iteration kept inside a sign-changing bracket, falling back to
/// bisection whenever a step would leave it.
fn safe_newton(c: &[f64; 4], mut lo: f64, mut hi: f64) -> f64 {
    if eval(c, lo) > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut y = 0.5 * (lo + hi);
    for _ in 0..500 {
        let f = eval(c, y);
        if f == 0.0 {
            return y;
        }
        if f < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        let df = eval_deriv(c, y);
        let newton = y - f / df;
        let inside = (newton - lo) * (newton - hi) < 0.0;
        let next = if df != 0.0 && inside {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - y).abs() <= 4.0 * f64::EPSILON * y.abs() {
            return next;
        }
        y = next;
    }
    y
}

/// All classical branches for drive rate `omega_drive` (internal units),
/// sorted by magnon number. `params.delta_m` is the bare magnon detuning.
pub fn solve_fixed_point(
    params: &SystemParams,
    omega_drive: f64,
) -> Result<Vec<ClassicalFixedPoint>> {
    let g_bm = params
        .g_bm_single
        .ok_or_else(|| Error::Domain("g_bm_single is required for the classical solve".into()))?;
    if !omega_drive.is_finite() {
        return Err(Error::Domain(format!(
            "drive rate must be finite, got {omega_drive}"
        )));
    }
    let cubic = MagnonCubic::new(params, g_bm, omega_drive);
    let roots = cubic.roots()?;
    let branch_count = roots.len();
    let omega = Complex64::new(omega_drive, 0.0);
    let i = Complex64::i();
    let photon_response = Complex64::new(params.kappa_a / 2.0, params.delta_c);
    let phonon_response = Complex64::new(params.gamma_b / 2.0, params.omega_b);
    let tolerance_scale = omega_drive.abs().max(params.omega_b);

    let mut out = Vec::with_capacity(branch_count);
    for x in roots {
        let beta = -i * g_bm * x / phonon_response;
        let delta_m_eff = params.delta_m + 2.0 * g_bm * beta.re;
        let magnon_response = Complex64::new(params.kappa_m / 2.0, delta_m_eff)
            + params.g_am * params.g_am / photon_response;
        let epsilon = omega / magnon_response;
        let alpha = -i * params.g_am * epsilon / photon_response;
        // Recompute β from the back-substituted ε so the residual is honest.
        let beta = -i * g_bm * epsilon.norm_sqr() / phonon_response;
        let delta_m_eff = params.delta_m + 2.0 * g_bm * beta.re;

        let r_alpha =
            -i * params.delta_c * alpha - i * params.g_am * epsilon - params.kappa_a / 2.0 * alpha;
        let r_eps = -i * delta_m_eff * epsilon - i * params.g_am * alpha + omega
            - params.kappa_m / 2.0 * epsilon;
        let r_beta = -i * params.omega_b * beta
            - i * g_bm * epsilon.norm_sqr()
            - params.gamma_b / 2.0 * beta;
        let residual = r_alpha.norm().max(r_eps.norm()).max(r_beta.norm());
        if residual > 1e-10 * tolerance_scale {
            return Err(Error::Numerical(format!(
                "classical residual {residual:e} exceeds tolerance at |ε|² = {x:e}"
            )));
        }

        let g_bm_enhanced = g_bm * epsilon.norm();
        let coupling_phase = if epsilon.norm() > 0.0 {
            epsilon.arg()
        } else {
            0.0
        };
        let fluct = SystemParams {
            delta_m: delta_m_eff,
            g_bm_enhanced,
            ..params.clone()
        };
        let stable = is_stable(&drift_matrix(&fluct, g_bm_enhanced))?.stable;
        out.push(ClassicalFixedPoint {
            alpha,
            epsilon,
            beta,
            delta_m_eff,
            g_bm_enhanced,
            coupling_phase,
            branch_count,
            residual,
            stable,
        });
    }
    Ok(out)
}

/// Holstein–Primakoff validity ratio `|ε|² / (2 N s)`; values above
/// [`LOW_EXCITATION_WARNING`] signal the bosonic magnon picture breaking down.
pub fn low_excitation_check(fp: &ClassicalFixedPoint, drive: &DriveParams) -> Result<f64> {
    let n = drive.spin_count();
    if !(n > 0.0) {
        return Err(Error::Domain(format!("spin count must be > 0, got {n}")));
    }
    Ok(fp.magnon_number() / (2.0 * n * FE3_SPIN))
}

pub const LOW_EXCITATION_WARNING: f64 = 0.1;
