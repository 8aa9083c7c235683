//! Bipartite Gaussian entanglement and Bogoliubov-mode diagnostics.
//!
//! Covariances use the symmetrized convention `σ_ij = ⟨M_i M_j + M_j M_i⟩/2`,
//! so the vacuum is `I/2` and every physical state has symplectic eigenvalues
//! of at least `1/2`.
//!
//! # Moments used by the Bogoliubov occupancies
//!
//! With `a = (x1 + i y1)/√2` and `[x1, y1] = i`,
//! `a†a = (x1² + y1² - 1)/2`, hence `⟨δa†δa⟩ = (σ11 + σ22 - 1)/2` and likewise
//! `⟨δb†δb⟩ = (σ55 + σ66 - 1)/2`. Since photon and phonon operators commute,
//! `ab + a†b† = x1 q - y1 p`, so `⟨δaδb + δa†δb†⟩ = σ15 - σ26`
//! (one-based indices).

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::Serialize;

use crate::dynamics::Mat6;
use crate::error::{Error, Result};
use crate::model::{Mode, VACUUM_VARIANCE};

/// Tolerance below the vacuum bound still accepted as physical.
pub const PHYSICALITY_TOLERANCE: f64 = 1e-9;
/// Negative radicands down to this size are rounding noise and clamp to 0.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Pair {
    /// Photon–phonon.
    Ab,
    /// Photon–magnon.
    Am,
    /// Magnon–phonon.
    Mb,
}

impl Pair {
    pub const ALL: [Pair; 3] = [Pair::Ab, Pair::Am, Pair::Mb];

    pub fn modes(self) -> (Mode, Mode) {
        match self {
            Pair::Ab => (Mode::Photon, Mode::Phonon),
            Pair::Am => (Mode::Photon, Mode::Magnon),
            Pair::Mb => (Mode::Magnon, Mode::Phonon),
        }
    }

    /// Rows/columns of σ kept for this pair, zero-based.
    pub fn indices(self) -> [usize; 4] {
        let (first, second) = self.modes();
        let (i, j) = (first.offset(), second.offset());
        [i, i + 1, j, j + 1]
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::Ab => "ab",
            Pair::Am => "am",
            Pair::Mb => "mb",
        }
    }
}

/// Two-mode covariance `σ' = [[R1, R3], [R3ᵀ, R2]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCovariance {
    pub pair: Pair,
    pub sigma_prime: Matrix4<f64>,
    pub r1: Matrix2<f64>,
    pub r2: Matrix2<f64>,
    pub r3: Matrix2<f64>,
}

impl ReducedCovariance {
    pub fn from_matrix(pair: Pair, sigma_prime: Matrix4<f64>) -> Self {
        Self {
            pair,
            r1: sigma_prime.fixed_view::<2, 2>(0, 0).into_owned(),
            r2: sigma_prime.fixed_view::<2, 2>(2, 2).into_owned(),
            r3: sigma_prime.fixed_view::<2, 2>(0, 2).into_owned(),
            sigma_prime,
        }
    }
}

pub fn reduce_covariance(sigma: &Mat6, pair: Pair) -> ReducedCovariance {
    let idx = pair.indices();
    let sub = Matrix4::from_fn(|r, c| sigma[(idx[r], idx[c])]);
    ReducedCovariance::from_matrix(pair, sub)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogNegativity {
    pub e_n: f64,
    /// Smallest symplectic eigenvalue of the partially transposed state.
    pub eta: f64,
}

/// Logarithmic negativity `E_N = max[0, -ln 2η]` with
/// `η = 2^{-1/2} {Σ - [Σ² - 4 det σ']^{1/2}}^{1/2}` and
/// `Σ = det R1 + det R2 - 2 det R3`.
pub fn log_negativity(rc: &ReducedCovariance) -> Result<LogNegativity> {
    let det = rc.sigma_prime.determinant();
    if !(det > 0.0) {
        return Err(Error::Unphysical(format!(
            "reduced covariance ({}) has det = {det:e}",
            rc.pair.label()
        )));
    }
    let sigma = rc.r1.determinant() + rc.r2.determinant() - 2.0 * rc.r3.determinant();
    let inner = clamp_radicand(sigma * sigma - 4.0 * det, "Σ² - 4 det σ'")?;
    // Σ - √(Σ² - 4 det) cancels badly for strong entanglement; the
    // conjugate form 4 det / (Σ + √(...)) is the same number without it.
    let outer = if sigma > 0.0 {
        4.0 * det / (sigma + inner.sqrt())
    } else {
        clamp_radicand(sigma - inner.sqrt(), "Σ - √(Σ² - 4 det σ')")?
    };
    let eta = (outer / 2.0).sqrt();
    // η within a few ulps of 1/2 is a separable state seen through rounding.
    let e_n = if 2.0 * eta >= 1.0 - 8.0 * f64::EPSILON {
        0.0
    } else {
        -(2.0 * eta).ln()
    };
    Ok(LogNegativity { e_n, eta })
}

fn clamp_radicand(v: f64, what: &str) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -RADICAND_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::Unphysical(format!("{what} = {v:e} < 0")))
    }
}

/// Two-mode squeezed vacuum with squeezing `r`, ordered `[x1, p1, x2, p2]`.
pub fn two_mode_squeezed_vacuum(r: f64) -> Matrix4<f64> {
    let (c, s) = ((2.0 * r).cosh() / 2.0, (2.0 * r).sinh() / 2.0);
    Matrix4::new(
        c, 0.0, s, 0.0, //
        0.0, c, 0.0, -s, //
        s, 0.0, c, 0.0, //
        0.0, -s, 0.0, c,
    )
}

/// `T(source → target) = E_target / E_source`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Transfer {
    Finite(f64),
    /// Source pair unentangled, target entangled.
    Infinite,
    /// Neither pair entangled.
    Undefined,
}

impl Transfer {
    pub fn value(self) -> Option<f64> {
        match self {
            Transfer::Finite(v) => Some(v),
            Transfer::Infinite => Some(f64::INFINITY),
            Transfer::Undefined => None,
        }
    }
}

pub fn transfer_coefficient(e_source: f64, e_target: f64) -> Result<Transfer> {
    if !(e_source >= 0.0) || !(e_target >= 0.0) {
        return Err(Error::Domain(format!(
            "entanglement must be >= 0, got source {e_source}, target {e_target}"
        )));
    }
    Ok(if e_source > 0.0 {
        Transfer::Finite(e_target / e_source)
    } else if e_target > 0.0 {
        Transfer::Infinite
    } else {
        Transfer::Undefined
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Squeezing {
    /// Two-mode squeezing parameter `r = artanh(G_bm/g_am)`.
    pub r: f64,
    /// Magnon–Bogoliubov coupling `√(g_am² - G_bm²)`.
    pub g_eff: f64,
}

pub fn squeeze_parameter(g_bm: f64, g_am: f64) -> Result<Squeezing> {
    if !(g_am > 0.0) {
        return Err(Error::Domain(format!("g_am must be > 0, got {g_am}")));
    }
    let ratio = g_bm / g_am;
    if !(ratio.abs() < 1.0) {
        return Err(Error::Domain(format!(
            "|G_bm/g_am| = {} >= 1: Bogoliubov modes undefined outside the reservoir regime",
            ratio.abs()
        )));
    }
    Ok(Squeezing {
        r: ratio.atanh(),
        g_eff: (g_am * g_am - g_bm * g_bm).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BogoliubovOccupancies {
    pub n_beta1: f64,
    pub n_beta2: f64,
}

pub fn bogoliubov_occupancies(sigma: &Mat6, r: f64) -> Result<BogoliubovOccupancies> {
    if !r.is_finite() {
        return Err(Error::Domain(format!(
            "squeezing parameter must be finite, got {r}"
        )));
    }
    let n_a = (sigma[(0, 0)] + sigma[(1, 1)] - 1.0) / 2.0;
    let n_b = (sigma[(4, 4)] + sigma[(5, 5)] - 1.0) / 2.0;
    for (name, n) in [("photon", n_a), ("phonon", n_b)] {
        if n < -PHYSICALITY_TOLERANCE {
            return Err(Error::Unphysical(format!("{name} occupancy {n:e} < 0")));
        }
    }
    let pair = sigma[(0, 4)] - sigma[(1, 5)];
    let (c, s) = (r.cosh(), r.sinh());
    Ok(BogoliubovOccupancies {
        n_beta1: c * c * n_a + s * s * n_b + s * s + s * c * pair,
        n_beta2: c * c * n_b + s * s * n_a + s * s + s * c * pair,
    })
}

/// Symplectic form `⊕ [[0, 1], [-1, 0]]` on `modes` modes.
pub fn symplectic_form(modes: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        j[(2 * k, 2 * k + 1)] = 1.0;
        j[(2 * k + 1, 2 * k)] = -1.0;
    }
    j
}

/// Symplectic eigenvalues of a positive-definite covariance matrix, ascending.
/// `None` if `sigma` is not positive definite.
///
/// With `s = σ^{1/2}`, the antisymmetric `M = s J s` has eigenvalues `±iν_k`,
/// so the symmetric `MᵀM` has each `ν_k²` twice.
pub fn symplectic_eigenvalues(sigma: &DMatrix<f64>) -> Option<Vec<f64>> {
    let n = sigma.nrows();
    assert!(n.is_multiple_of(2) && n == sigma.ncols());
    let sym = (sigma + sigma.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
        return None;
    }
    let root = &eig.eigenvectors
        * DMatrix::from_diagonal(&eig.eigenvalues.map(f64::sqrt))
        * eig.eigenvectors.transpose();
    let m = &root * symplectic_form(n / 2) * &root;
    let mut nu2: Vec<f64> = (m.transpose() * &m)
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .copied()
        .collect();
    nu2.sort_by(f64::total_cmp);
    Some(nu2.iter().step_by(2).map(|v| v.max(0.0).sqrt()).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physicality {
    pub physical: bool,
    /// Smallest symplectic eigenvalue; 0 when σ is not positive definite.
    pub smallest: f64,
}

/// Uncertainty-principle check: every symplectic eigenvalue ≥ 1/2 - 10⁻⁹.
pub fn physicality_check(sigma: &DMatrix<f64>) -> Physicality {
    match symplectic_eigenvalues(sigma) {
        Some(nu) => {
            let smallest = nu.first().copied().unwrap_or(f64::INFINITY);
            Physicality {
                physical: smallest >= VACUUM_VARIANCE - PHYSICALITY_TOLERANCE,
                smallest,
            }
        }
        None => Physicality {
            physical: false,
            smallest: 0.0,
        },
    }
}

pub fn physicality_check6(sigma: &Mat6) -> Physicality {
    physicality_check(&DMatrix::from_iterator(6, 6, sigma.iter().copied()))
}
