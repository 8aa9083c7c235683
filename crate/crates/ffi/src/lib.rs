//! C ABI over the `magnomech` engine.
//!
//! Parameters and results live behind opaque handles created and freed by
//! this library. Every fallible call returns an [`MmStatus`]; on failure the
//! message is available from [`mm_last_error`] on the same thread. Matrix
//! buffers are 36 doubles in row-major order over `[x1, y1, x2, y2, q, p]`.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use magnomech::config::RunConfig;
use magnomech::dynamics::{diffusion_matrix, drift_matrix, Mat6};
use magnomech::entanglement::{log_negativity, reduce_covariance, Pair};
use magnomech::lyapunov::solve_lyapunov;
use magnomech::model::{thermal_occupancy, DriftModel, SystemParams};
use magnomech::pipeline::{evaluate, PointResult};
use magnomech::sweep::Axis;
use magnomech::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParams = 2,
    Domain = 3,
    Config = 4,
    Unstable = 5,
    Numerical = 6,
    Unphysical = 7,
    Io = 8,
    Panic = 9,
}

/// Bipartition selector for log-negativity queries.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MmPair {
    PhotonPhonon = 0,
    PhotonMagnon = 1,
    MagnonPhonon = 2,
}

impl From<MmPair> for Pair {
    fn from(p: MmPair) -> Self {
        match p {
            MmPair::PhotonPhonon => Pair::Ab,
            MmPair::PhotonMagnon => Pair::Am,
            MmPair::MagnonPhonon => Pair::Mb,
        }
    }
}

/// Opaque system parameters, in units of the mechanical frequency.
pub struct MmParams(SystemParams);

/// Opaque outcome of one steady-state evaluation.
pub struct MmResult(PointResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MmStatus {
    match e {
        Error::InvalidParams(_) => MmStatus::InvalidParams,
        Error::Domain(_) => MmStatus::Domain,
        Error::Config(_) => MmStatus::Config,
        Error::Unstable(_) | Error::AllUnstable { .. } => MmStatus::Unstable,
        Error::Numerical(_) => MmStatus::Numerical,
        Error::Unphysical(_) => MmStatus::Unphysical,
        Error::Io { .. } => MmStatus::Io,
    }
}

/// Run `f`, translating errors and panics into a status plus message.
fn guarded(f: impl FnOnce() -> Result<(), (MmStatus, String)>) -> MmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MmStatus::Panic
        }
    }
}

fn lift(e: Error) -> (MmStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (MmStatus, String) {
    (MmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_mat(p: *const f64, what: &str) -> Result<Mat6, (MmStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(Mat6::from_row_slice(std::slice::from_raw_parts(p, 36)))
}

unsafe fn write_mat(m: &Mat6, out: *mut f64) {
    let out = std::slice::from_raw_parts_mut(out, 36);
    for i in 0..6 {
        for j in 0..6 {
            out[6 * i + j] = m[(i, j)];
        }
    }
}

unsafe fn write_out<T>(out: *mut T, v: T, what: &str) -> Result<(), (MmStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

unsafe fn name_arg<'a>(name: *const c_char) -> Result<&'a str, (MmStatus, String)> {
    if name.is_null() {
        return Err(null("name"));
    }
    CStr::from_ptr(name)
        .to_str()
        .map_err(|_| (MmStatus::Config, "name is not UTF-8".into()))
}

/// Message for the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New parameter set: the reference device with every coupling off and a
/// vacuum bath. Free with [`mm_params_free`].
#[no_mangle]
pub extern "C" fn mm_params_new() -> *mut MmParams {
    Box::into_raw(Box::new(MmParams(SystemParams::default())))
}

/// Load parameters from a TOML or JSON config (the `[system]` table).
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn mm_params_from_config(
    path: *const c_char,
    out: *mut *mut MmParams,
) -> MmStatus {
    guarded(|| {
        let path = name_arg(path)?;
        let cfg = RunConfig::from_path(Path::new(path)).map_err(lift)?;
        write_out(out, Box::into_raw(Box::new(MmParams(cfg.params))), "out")
    })
}

/// # Safety
/// `params` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mm_params_free(params: *mut MmParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

fn set_field(p: &mut SystemParams, name: &str, v: f64) -> Result<(), (MmStatus, String)> {
    match name {
        "omega_c" => p.omega_c = v,
        "omega_m" => p.omega_m = v,
        "g_bm_single" => p.g_bm_single = Some(v),
        _ => Axis::from_name(name)
            .and_then(|a| a.apply(p, v))
            .map_err(lift)?,
    }
    Ok(())
}

fn get_field(p: &SystemParams, name: &str) -> Result<f64, (MmStatus, String)> {
    Ok(match name {
        "omega_c" => p.omega_c,
        "omega_m" => p.omega_m,
        "omega_b" => p.omega_b,
        "delta_c" => p.delta_c,
        "delta_m" => p.delta_m,
        "g_am" => p.g_am,
        "G_bm" => p.g_bm_enhanced,
        "kappa_a" => p.kappa_a,
        "kappa_m" => p.kappa_m,
        "gamma_b" => p.gamma_b,
        "nbar_a" => p.occupancies().map_err(lift)?.nbar_a,
        "nbar_m" => p.occupancies().map_err(lift)?.nbar_m,
        "nbar_b" => p.occupancies().map_err(lift)?.nbar_b,
        "temperature_K" => p.temperature_k().unwrap_or(f64::NAN),
        other => return Err((MmStatus::Config, format!("unknown parameter {other:?}"))),
    })
}

/// Set one parameter by its config key (`delta_m`, `G_bm`, `kappa_a`,
/// `temperature_K`, `nbar_b`, `G_bm_over_g_am`, `Q`, ...).
///
/// # Safety
/// `params` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn mm_params_set(
    params: *mut MmParams,
    name: *const c_char,
    value: f64,
) -> MmStatus {
    guarded(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        set_field(&mut p.0, name_arg(name)?, value)
    })
}

/// # Safety
/// `params` must be a live handle, `name` a NUL-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_params_get(
    params: *const MmParams,
    name: *const c_char,
    out: *mut f64,
) -> MmStatus {
    guarded(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        write_out(out, get_field(&p.0, name_arg(name)?)?, "out")
    })
}

/// Select the resonant (`rwa != 0`) or full magnomechanical coupling.
///
/// # Safety
/// `params` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn mm_params_set_rwa(params: *mut MmParams, rwa: c_int) -> MmStatus {
    guarded(|| {
        let p = params.as_mut().ok_or_else(|| null("params"))?;
        p.0.drift_model = if rwa != 0 {
            DriftModel::Rwa
        } else {
            DriftModel::Full
        };
        Ok(())
    })
}

/// Drift matrix at the handle's `G_bm`.
///
/// # Safety
/// `params` must be a live handle and `out` must hold 36 doubles.
#[no_mangle]
pub unsafe extern "C" fn mm_drift_matrix(params: *const MmParams, out: *mut f64) -> MmStatus {
    guarded(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = p.0.clone().validate().map_err(lift)?;
        write_mat(&drift_matrix(&p, p.g_bm_enhanced), out);
        Ok(())
    })
}

/// # Safety
/// `params` must be a live handle and `out` must hold 36 doubles.
#[no_mangle]
pub unsafe extern "C" fn mm_diffusion_matrix(params: *const MmParams, out: *mut f64) -> MmStatus {
    guarded(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = diffusion_matrix(&p.0.clone().validate().map_err(lift)?).map_err(lift)?;
        write_mat(&d, out);
        Ok(())
    })
}

/// Evaluate the steady state. An unstable point is not an error: the result
/// reports `stable = 0` and has no covariance.
///
/// # Safety
/// `params` must be a live handle and `out` writable. Free the result with
/// [`mm_result_free`].
#[no_mangle]
pub unsafe extern "C" fn mm_evaluate(params: *const MmParams, out: *mut *mut MmResult) -> MmStatus {
    guarded(|| {
        let p = params.as_ref().ok_or_else(|| null("params"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = evaluate(&p.0).map_err(lift)?;
        *out = Box::into_raw(Box::new(MmResult(r)));
        Ok(())
    })
}

/// # Safety
/// `result` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mm_result_free(result: *mut MmResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `result` must be a live handle and `stable`, `max_real_part` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_result_stability(
    result: *const MmResult,
    stable: *mut c_int,
    max_real_part: *mut f64,
) -> MmStatus {
    guarded(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        write_out(stable, c_int::from(r.0.verdict.stable), "stable")?;
        write_out(max_real_part, r.0.verdict.max_real_part, "max_real_part")
    })
}

fn steady(r: &MmResult) -> Result<&magnomech::pipeline::SteadyState, (MmStatus, String)> {
    r.0.steady_state().ok_or_else(|| {
        (
            MmStatus::Unstable,
            "point is unstable; no steady state".into(),
        )
    })
}

/// Steady-state covariance. Fails with `Unstable` for unstable points.
///
/// # Safety
/// `result` must be a live handle and `out` must hold 36 doubles.
#[no_mangle]
pub unsafe extern "C" fn mm_result_covariance(result: *const MmResult, out: *mut f64) -> MmStatus {
    guarded(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        write_mat(&steady(r)?.covariance.sigma, out);
        Ok(())
    })
}

/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mm_result_log_negativity(
    result: *const MmResult,
    pair: MmPair,
    out: *mut f64,
) -> MmStatus {
    guarded(|| {
        let r = result.as_ref().ok_or_else(|| null("result"))?;
        write_out(out, steady(r)?.report.pair(pair.into()).e_n, "out")
    })
}

/// Solve `Aσ + σAᵀ = -D` for arbitrary 6×6 `A` and `D`.
///
/// # Safety
/// `a`, `d` and `out` must each point to 36 doubles.
#[no_mangle]
pub unsafe extern "C" fn mm_solve_lyapunov(
    a: *const f64,
    d: *const f64,
    out: *mut f64,
) -> MmStatus {
    guarded(|| {
        let a = read_mat(a, "a")?;
        let d = read_mat(d, "d")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let ss = solve_lyapunov(&a, &d).map_err(lift)?;
        write_mat(&ss.sigma, out);
        Ok(())
    })
}

/// Logarithmic negativity of one pair of a 6×6 covariance matrix.
///
/// # Safety
/// `sigma` must point to 36 doubles and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_log_negativity(
    sigma: *const f64,
    pair: MmPair,
    out: *mut f64,
) -> MmStatus {
    guarded(|| {
        let s = read_mat(sigma, "sigma")?;
        let ln = log_negativity(&reduce_covariance(&s, pair.into())).map_err(lift)?;
        write_out(out, ln.e_n, "out")
    })
}

/// Mean thermal occupancy of a mode at `omega` rad/s and `kelvin`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mm_thermal_occupancy(omega: f64, kelvin: f64, out: *mut f64) -> MmStatus {
    guarded(|| write_out(out, thermal_occupancy(omega, kelvin).map_err(lift)?, "out"))
}
