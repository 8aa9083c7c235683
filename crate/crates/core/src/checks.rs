//! Self-test suite behind `magnomech check`: closed forms and cross-checks
//! that should hold on any build.

use crate::dynamics::{
    default_step, diffusion_matrix, drift_matrix, evolve_covariance, is_stable, Mat6,
};
use crate::entanglement::{
    log_negativity, physicality_check6, two_mode_squeezed_vacuum, Pair, ReducedCovariance,
    PHYSICALITY_TOLERANCE,
};
use crate::error::Result;
use crate::figures::{datasets, fig2_params, FigureId};
use crate::lyapunov::solve_lyapunov;
use crate::model::{thermal_occupancy, Bath, SystemParams};
use crate::sweep::run_sweep;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> CheckOutcome {
    CheckOutcome {
        name,
        passed,
        detail,
    }
}

fn guard(name: &'static str, f: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    f().unwrap_or_else(|e| outcome(name, false, format!("error: {e}")))
}

fn tmsv_closed_form() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for r in [0.1, 0.5, 1.0, 2.0] {
        let rc = ReducedCovariance::from_matrix(Pair::Ab, two_mode_squeezed_vacuum(r));
        worst = worst.max((log_negativity(&rc)?.e_n - 2.0 * r).abs());
    }
    Ok(outcome(
        "tmsv_log_negativity",
        worst <= 1e-10,
        format!("max |E_N - 2r| = {worst:.2e}"),
    ))
}

fn vacuum_is_separable() -> Result<CheckOutcome> {
    let rc = ReducedCovariance::from_matrix(Pair::Ab, nalgebra::Matrix4::identity() * 0.5);
    let e = log_negativity(&rc)?.e_n;
    Ok(outcome("vacuum_separable", e == 0.0, format!("E_N = {e}")))
}

fn detailed_balance() -> Result<CheckOutcome> {
    let nbar = [0.3, 1.7, 0.2];
    let p = SystemParams {
        g_am: 0.0,
        bath: Bath::Occupancies {
            nbar_a: nbar[0],
            nbar_m: nbar[1],
            nbar_b: nbar[2],
        },
        ..SystemParams::default()
    };
    let ss = solve_lyapunov(&drift_matrix(&p, 0.0), &diffusion_matrix(&p)?)?;
    let expect = Mat6::from_fn(|i, j| if i == j { nbar[i / 2] + 0.5 } else { 0.0 });
    let err = (ss.sigma - expect).amax();
    Ok(outcome(
        "thermal_detailed_balance",
        err <= 1e-12,
        format!("max error {err:.2e}"),
    ))
}

fn thermal_reference() -> Result<CheckOutcome> {
    let n = thermal_occupancy(2.0 * std::f64::consts::PI * 10e6, 0.01)?;
    let rel = (n - 20.340618351800997).abs() / 20.340618351800997;
    Ok(outcome(
        "thermal_occupancy",
        rel <= 1e-12,
        format!("nbar(10 MHz, 10 mK) = {n}"),
    ))
}

fn time_domain_agreement() -> Result<CheckOutcome> {
    let p = SystemParams {
        delta_m: -1.5,
        ..fig2_params()
    };
    let a = drift_matrix(&p, p.g_bm_enhanced);
    let d = diffusion_matrix(&p)?;
    let verdict = is_stable(&a)?;
    let ss = solve_lyapunov(&a, &d)?;
    let t_final = 50.0 / verdict.max_real_part.abs();
    let evolved = evolve_covariance(
        &a,
        &d,
        &(Mat6::identity() * 0.5),
        t_final,
        default_step(p.omega_b),
    )?;
    let diff = (evolved - ss.sigma).amax();
    Ok(outcome(
        "lyapunov_vs_time_domain",
        diff <= 1e-6,
        format!("max difference {diff:.2e}"),
    ))
}

fn baseline_sweep_is_physical() -> Result<CheckOutcome> {
    let d = &datasets(FigureId::Fig2)[0];
    let rows = run_sweep(&d.spec, &d.base, None)?;
    let mut worst_residual: f64 = 0.0;
    let mut smallest = f64::INFINITY;
    for ss in rows.iter().filter_map(|r| r.point.steady_state()) {
        worst_residual = worst_residual.max(ss.covariance.residual_norm / ss.diffusion.amax());
        smallest = smallest.min(physicality_check6(&ss.covariance.sigma).smallest);
    }
    let ok = worst_residual <= 1e-10 && smallest >= 0.5 - PHYSICALITY_TOLERANCE;
    Ok(outcome(
        "baseline_sweep_physical",
        ok,
        format!("{} points, worst relative residual {worst_residual:.2e}, smallest symplectic {smallest:.6}", rows.len()),
    ))
}

fn uncoupled_sweep_is_separable() -> Result<CheckOutcome> {
    let d = &datasets(FigureId::Fig2)[2];
    let rows = run_sweep(&d.spec, &d.base, None)?;
    let worst = rows
        .iter()
        .filter_map(|r| r.point.steady_state())
        .map(|ss| ss.report.ab.e_n)
        .fold(0.0, f64::max);
    Ok(outcome(
        "no_magnomechanics_no_entanglement",
        worst < 1e-10,
        format!("max E_ab = {worst:.2e}"),
    ))
}

pub fn run_checks() -> Vec<CheckOutcome> {
    vec![
        guard("tmsv_log_negativity", tmsv_closed_form),
        guard("vacuum_separable", vacuum_is_separable),
        guard("thermal_detailed_balance", detailed_balance),
        guard("thermal_occupancy", thermal_reference),
        guard("lyapunov_vs_time_domain", time_domain_agreement),
        guard("baseline_sweep_physical", baseline_sweep_is_physical),
        guard(
            "no_magnomechanics_no_entanglement",
            uncoupled_sweep_is_separable,
        ),
    ]
}
