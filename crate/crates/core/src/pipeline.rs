//! One parameter point through drift → stability → Lyapunov → metrics.

use crate::classical::{solve_fixed_point, ClassicalFixedPoint};
use crate::dynamics::{diffusion_matrix, drift_matrix, is_stable, Mat6, StabilityVerdict};
use crate::entanglement::{
    bogoliubov_occupancies, log_negativity, reduce_covariance, squeeze_parameter,
    transfer_coefficient, BogoliubovOccupancies, LogNegativity, Pair, Squeezing, Transfer,
};
use crate::error::{Error, Result};
use crate::lyapunov::{solve_lyapunov, SteadyStateCovariance};
use crate::model::{rabi_from_drive, DriveParams, SystemParams};

#[derive(Debug, Clone, PartialEq)]
pub struct EntanglementReport {
    pub ab: LogNegativity,
    pub am: LogNegativity,
    pub mb: LogNegativity,
    /// `T(E_mb → E_ab)`.
    pub transfer_mb_to_ab: Transfer,
    /// Present only when `|G_bm| < g_am`.
    pub squeezing: Option<Squeezing>,
    pub occupancies: Option<BogoliubovOccupancies>,
}

impl EntanglementReport {
    pub fn pair(&self, pair: Pair) -> LogNegativity {
        match pair {
            Pair::Ab => self.ab,
            Pair::Am => self.am,
            Pair::Mb => self.mb,
        }
    }
}

pub fn entanglement_report(sigma: &Mat6, g_bm: f64, g_am: f64) -> Result<EntanglementReport> {
    let ab = log_negativity(&reduce_covariance(sigma, Pair::Ab))?;
    let am = log_negativity(&reduce_covariance(sigma, Pair::Am))?;
    let mb = log_negativity(&reduce_covariance(sigma, Pair::Mb))?;
    let transfer_mb_to_ab = transfer_coefficient(mb.e_n, ab.e_n)?;
    let squeezing = squeeze_parameter(g_bm, g_am).ok();
    let occupancies = match squeezing {
        Some(s) => Some(bogoliubov_occupancies(sigma, s.r)?),
        None => None,
    };
    Ok(EntanglementReport {
        ab,
        am,
        mb,
        transfer_mb_to_ab,
        squeezing,
        occupancies,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyState {
    pub drift: Mat6,
    pub diffusion: Mat6,
    pub covariance: SteadyStateCovariance,
    pub report: EntanglementReport,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PointOutcome {
    Stable(Box<SteadyState>),
    Unstable {
        drift: Box<Mat6>,
        diffusion: Box<Mat6>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    /// Parameters the fluctuation analysis actually used.
    pub params: SystemParams,
    pub verdict: StabilityVerdict,
    pub outcome: PointOutcome,
    /// Classical branches, when the coupling came from a drive.
    pub branches: Option<Vec<ClassicalFixedPoint>>,
}

impl PointResult {
    pub fn steady_state(&self) -> Option<&SteadyState> {
        match &self.outcome {
            PointOutcome::Stable(s) => Some(s),
            PointOutcome::Unstable { .. } => None,
        }
    }

    pub fn matrices(&self) -> (&Mat6, &Mat6) {
        match &self.outcome {
            PointOutcome::Stable(s) => (&s.drift, &s.diffusion),
            PointOutcome::Unstable { drift, diffusion } => (drift, diffusion),
        }
    }
}

/// Evaluate one point with the coupling `params.g_bm_enhanced` taken as given.
/// Unstable points are a normal outcome, not an error.
pub fn evaluate(params: &SystemParams) -> Result<PointResult> {
    let params = params.clone().validate()?;
    let g_bm = params.g_bm_enhanced;
    let drift = drift_matrix(&params, g_bm);
    let diffusion = diffusion_matrix(&params)?;
    let verdict = is_stable(&drift)?;
    if !verdict.stable {
        return Ok(PointResult {
            params,
            verdict,
            outcome: PointOutcome::Unstable {
                drift: Box::new(drift),
                diffusion: Box::new(diffusion),
            },
            branches: None,
        });
    }
    let covariance = solve_lyapunov(&drift, &diffusion)?;
    if !covariance.physical {
        return Err(Error::Unphysical(format!(
            "steady state has symplectic eigenvalue {:.6e} < 1/2",
            covariance.smallest_symplectic
        )));
    }
    let report = entanglement_report(&covariance.sigma, g_bm, params.g_am)?;
    Ok(PointResult {
        params,
        verdict,
        outcome: PointOutcome::Stable(Box::new(SteadyState {
            drift,
            diffusion,
            covariance,
            report,
        })),
        branches: None,
    })
}

/// Evaluate with the coupling and detuning produced by a classical drive.
/// `params.delta_m` is the bare detuning; the lowest-|ε|² branch is analysed.
pub fn evaluate_driven(params: &SystemParams, drive: &DriveParams) -> Result<PointResult> {
    let params = params.clone().validate()?;
    let drive = drive.clone().validate()?;
    let omega = rabi_from_drive(&drive) / params.unit_rad_per_s;
    let branches = solve_fixed_point(&params, omega)?;
    let chosen = branches[0].operating_params(&params);
    let mut result = evaluate(&chosen)?;
    result.branches = Some(branches);
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Bath;

    fn fig2_blue(delta_m: f64) -> SystemParams {
        SystemParams {
            delta_m,
            g_am: 0.1,
            g_bm_enhanced: 0.035,
            bath: Bath::Occupancies {
                nbar_a: 0.0,
                nbar_m: 0.0,
                nbar_b: 0.2,
            },
            ..SystemParams::default()
        }
    }

    #[test]
    fn blue_line_peak_point_is_entangled() {
        let r = evaluate(&fig2_blue(-1.0)).unwrap();
        let ss = r.steady_state().expect("stable");
        assert!(ss.report.ab.e_n > 0.1);
        assert!(ss.covariance.residual_norm <= 1e-10 * ss.diffusion.amax());
        // photon-phonon correlations present
        let rc = reduce_covariance(&ss.covariance.sigma, Pair::Ab);
        assert!(rc.r3.amax() > 1e-3);
    }

    #[test]
    fn unstable_points_are_reported_not_failed() {
        let p = SystemParams {
            g_am: 0.0,
            ..fig2_blue(-1.0)
        };
        let r = evaluate(&p).unwrap();
        assert!(!r.verdict.stable);
        assert!(r.steady_state().is_none());
    }

    #[test]
    fn invalid_parameters_fail() {
        let p = SystemParams {
            kappa_a: 0.0,
            ..fig2_blue(-1.0)
        };
        assert!(matches!(evaluate(&p), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn bogoliubov_block_needs_reservoir_regime() {
        let r = evaluate(&fig2_blue(-1.0)).unwrap();
        let rep = &r.steady_state().unwrap().report;
        assert!(rep.squeezing.is_some() && rep.occupancies.is_some());
        let p = SystemParams {
            g_bm_enhanced: 0.0,
            g_am: 0.0,
            ..fig2_blue(-1.0)
        };
        let rep = evaluate(&p).unwrap().steady_state().unwrap().report.clone();
        assert!(rep.squeezing.is_none() && rep.occupancies.is_none());
        assert_eq!(rep.transfer_mb_to_ab, Transfer::Undefined);
    }

    #[test]
    fn driven_evaluation_uses_the_fixed_point() {
        let p = SystemParams {
            g_bm_single: Some(1e-6),
            ..fig2_blue(-1.0)
        };
        let drive = DriveParams {
            b1: 1e-12,
            ..DriveParams::default()
        };
        let r = evaluate_driven(&p, &drive).unwrap();
        let branches = r.branches.as_ref().unwrap();
        assert_eq!(r.params.g_bm_enhanced, branches[0].g_bm_enhanced);
        assert_eq!(r.params.delta_m, branches[0].delta_m_eff);
    }
}
