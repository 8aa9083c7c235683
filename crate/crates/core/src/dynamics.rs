//! Linearized fluctuation dynamics `Ṁ = A M + N` in the quadrature basis
//! `[x1, y1, x2, y2, q, p]`.

use nalgebra::{Matrix6, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DriftModel, SystemParams};

pub type Mat6 = Matrix6<f64>;

/// Eigenvalues with real part above `-STABILITY_MARGIN` count as unstable.
pub const STABILITY_MARGIN: f64 = 1e-12;
/// Covariance entries beyond this magnitude abort integration.
pub const DIVERGENCE_LIMIT: f64 = 1e12;

/// Drift matrix for magnomechanical coupling `g_bm` (the enhanced coupling,
/// taken real and non-negative).
///
/// With [`DriftModel::Full`] the mechanical coupling enters as `-2G` at
/// (y2, q) and (p, x2): only the magnon phase quadrature is pushed by the
/// mechanical position and only the mechanical momentum by the magnon
/// amplitude. [`DriftModel::Rwa`] keeps only the two-mode-squeezing half of
/// that interaction, which gives `-G` at (x2, p), (y2, q), (q, y2), (p, x2).
pub fn drift_matrix(params: &SystemParams, g_bm: f64) -> Mat6 {
    let SystemParams {
        delta_c,
        delta_m,
        g_am,
        kappa_a,
        kappa_m,
        gamma_b,
        omega_b,
        ..
    } = *params;
    let mut a = Mat6::zeros();

    a[(0, 0)] = -kappa_a / 2.0;
    a[(0, 1)] = delta_c;
    a[(0, 3)] = g_am;
    a[(1, 0)] = -delta_c;
    a[(1, 1)] = -kappa_a / 2.0;
    a[(1, 2)] = -g_am;

    a[(2, 1)] = g_am;
    a[(2, 2)] = -kappa_m / 2.0;
    a[(2, 3)] = delta_m;
    a[(3, 0)] = -g_am;
    a[(3, 2)] = -delta_m;
    a[(3, 3)] = -kappa_m / 2.0;

    a[(4, 4)] = -gamma_b / 2.0;
    a[(4, 5)] = omega_b;
    a[(5, 4)] = -omega_b;
    a[(5, 5)] = -gamma_b / 2.0;

    match params.drift_model {
        DriftModel::Full => {
            a[(3, 4)] = -2.0 * g_bm;
            a[(5, 2)] = -2.0 * g_bm;
        }
        DriftModel::Rwa => {
            a[(2, 5)] = -g_bm;
            a[(3, 4)] = -g_bm;
            a[(4, 3)] = -g_bm;
            a[(5, 2)] = -g_bm;
        }
    }
    a
}

/// Diagonal diffusion matrix `diag[κa(2n̄a+1), κa(2n̄a+1), κm(2n̄m+1), …]/2`.
pub fn diffusion_matrix(params: &SystemParams) -> Result<Mat6> {
    let occ = params.occupancies()?;
    let d = |rate: f64, n: f64| rate * (2.0 * n + 1.0) / 2.0;
    let (da, dm, db) = (
        d(params.kappa_a, occ.nbar_a),
        d(params.kappa_m, occ.nbar_m),
        d(params.gamma_b, occ.nbar_b),
    );
    Ok(Mat6::from_diagonal(&nalgebra::Vector6::new(
        da, da, dm, dm, db, db,
    )))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict {
    pub stable: bool,
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
}

/// Stability of the linear flow from the eigenvalues of `a`.
pub fn is_stable(a: &Mat6) -> Result<StabilityVerdict> {
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(
            "drift matrix has non-finite entries".into(),
        ));
    }
    let schur = Schur::try_new(*a, f64::EPSILON, 10_000).ok_or_else(|| {
        Error::Numerical(format!(
            "eigenvalue iteration did not converge (|A|_F = {:.6e}, max |A_ij| = {:.6e})",
            a.norm(),
            a.amax()
        ))
    })?;
    let mut eigenvalues: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|x, y| y.re.total_cmp(&x.re).then(x.im.total_cmp(&y.im)));
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityVerdict {
        stable: max_real_part < -STABILITY_MARGIN,
        eigenvalues,
        max_real_part,
    })
}

/// Default integration step: a thousandth of a mechanical period.
pub fn default_step(omega_b: f64) -> f64 {
    1e-3 * 2.0 * std::f64::consts::PI / omega_b
}

fn covariance_rate(a: &Mat6, d: &Mat6, sigma: &Mat6) -> Mat6 {
    let a_sigma = a * sigma;
    a_sigma + a_sigma.transpose() + d
}

/// Integrate `σ̇ = Aσ + σAᵀ + D` from `sigma0` to `t_final` with classical
/// fourth-order Runge–Kutta. The step is shrunk so an integer number of steps
/// lands exactly on `t_final`; σ is symmetrized after every step.
pub fn evolve_covariance(a: &Mat6, d: &Mat6, sigma0: &Mat6, t_final: f64, dt: f64) -> Result<Mat6> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("time step must be > 0, got {dt}")));
    }
    if !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::Domain(format!(
            "t_final must be >= 0, got {t_final}"
        )));
    }
    let steps = (t_final / dt).ceil() as u64;
    if steps == 0 {
        return Ok(*sigma0);
    }
    let h = t_final / steps as f64;
    let mut sigma = (sigma0 + sigma0.transpose()) * 0.5;
    for step in 0..steps {
        let k1 = covariance_rate(a, d, &sigma);
        let k2 = covariance_rate(a, d, &(sigma + k1 * (h / 2.0)));
        let k3 = covariance_rate(a, d, &(sigma + k2 * (h / 2.0)));
        let k4 = covariance_rate(a, d, &(sigma + k3 * h));
        sigma += (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
        sigma = (sigma + sigma.transpose()) * 0.5;
        if !(sigma.amax() <= DIVERGENCE_LIMIT) {
            return Err(Error::Numerical(format!(
                "covariance diverged at t = {:.6e} (step {step})",
                (step + 1) as f64 * h
            )));
        }
    }
    Ok(sigma)
}
