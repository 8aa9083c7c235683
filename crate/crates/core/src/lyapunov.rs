//! Steady-state covariance from `Aσ + σAᵀ = -D`.
//!
//! The unknown is restricted to symmetric matrices, so the equation is a
//! dense linear system over the `n(n+1)/2` upper-triangle entries (21 for
//! six quadratures), solved by LU with partial pivoting.

use nalgebra::{DMatrix, DVector};

use crate::dynamics::{is_stable, Mat6};
use crate::entanglement::{physicality_check6, Physicality};
use crate::error::{Error, Result};

const DIM: usize = 6;
const UNKNOWNS: usize = DIM * (DIM + 1) / 2;
const REFINEMENT_ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateCovariance {
    pub sigma: Mat6,
    /// `max |Aσ + σAᵀ + D|`.
    pub residual_norm: f64,
    pub physical: bool,
    pub smallest_symplectic: f64,
}

/// Row-major packing table so `index[i][j]` gives the unknown for `σ_ij`.
#[allow(clippy::needless_range_loop)]
fn packing() -> [[usize; DIM]; DIM] {
    let mut table = [[0; DIM]; DIM];
    let mut k = 0;
    for i in 0..DIM {
        for j in i..DIM {
            table[i][j] = k;
            table[j][i] = k;
            k += 1;
        }
    }
    debug_assert_eq!(k, UNKNOWNS);
    table
}

/// Solve for the steady-state covariance. Refuses when `a` is not strictly
/// stable, since the equation then has no physical (or no unique) solution.
pub fn solve_lyapunov(a: &Mat6, d: &Mat6) -> Result<SteadyStateCovariance> {
    let verdict = is_stable(a)?;
    if !verdict.stable {
        return Err(Error::Unstable(Box::new(verdict)));
    }
    let sigma = solve_symmetric_system(a, d)?;
    let residual_norm = lyapunov_residual(a, d, &sigma);
    let Physicality { physical, smallest } = physicality_check6(&sigma);
    Ok(SteadyStateCovariance {
        sigma,
        residual_norm,
        physical,
        smallest_symplectic: smallest,
    })
}

fn solve_symmetric_system(a: &Mat6, d: &Mat6) -> Result<Mat6> {
    let idx = packing();
    let mut lhs = DMatrix::<f64>::zeros(UNKNOWNS, UNKNOWNS);
    let mut rhs = DVector::<f64>::zeros(UNKNOWNS);
    // Equation (i, j), i <= j: Σ_k A_ik σ_kj + σ_ik A_jk = -(D_ij + D_ji)/2.
    for i in 0..DIM {
        for j in i..DIM {
            let row = idx[i][j];
            for k in 0..DIM {
                lhs[(row, idx[k][j])] += a[(i, k)];
                lhs[(row, idx[i][k])] += a[(j, k)];
            }
            rhs[row] = -(d[(i, j)] + d[(j, i)]) / 2.0;
        }
    }
    let lu = lhs.clone().lu();
    let singular = || Error::Numerical("Lyapunov system is singular".into());
    let mut x = lu.solve(&rhs).ok_or_else(singular)?;
    // Near the stability boundary the system is ill-conditioned; a few rounds
    // of iterative refinement recover the digits a single LU solve loses.
    let mut best = (&lhs * &x - &rhs).amax();
    for _ in 0..REFINEMENT_ROUNDS {
        let r = &rhs - &lhs * &x;
        let candidate = &x + lu.solve(&r).ok_or_else(singular)?;
        let res = (&lhs * &candidate - &rhs).amax();
        if !(res < best) {
            break;
        }
        x = candidate;
        best = res;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("Lyapunov solution is not finite".into()));
    }
    Ok(Mat6::from_fn(|i, j| x[idx[i][j]]))
}

/// `max |Aσ + σAᵀ + D|`.
pub fn lyapunov_residual(a: &Mat6, d: &Mat6, sigma: &Mat6) -> f64 {
    (a * sigma + sigma * a.transpose() + d).amax()
}
