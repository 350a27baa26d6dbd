//! C ABI over `omit-core`.
//!
//! A model is created from parameters or a JSON config document and handed
//! out as an opaque pointer. Every call returns an [`OmitStatus`]; results go
//! through out-pointers. On failure the message is available from
//! [`omit_last_error_message`] on the same thread. Panics are caught at the
//! boundary and reported as [`OmitStatus::Panic`].
//!
//! Frequencies are angular (rad/s) throughout this interface.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use omit_core::config::parse_config;
use omit_core::inversion::{detection_metrics, estimate_charge, width_of_n};
use omit_core::params::{derive, DerivedParams, DetuningPolicy, SystemParams};
use omit_core::response::{epsilon_t_approx, epsilon_t_exact, tuning_points};
use omit_core::steady_state::solve_steady_state;
use omit_core::{ErrorKind, OmitError, PhysicalConstants};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmitStatus {
    Ok = 0,
    NullPointer = 1,
    Config = 2,
    Domain = 3,
    Convergence = 4,
    Panic = 5,
}

/// System parameters. `has_delta_c = false` selects the detuning that puts
/// the effective detuning on the mechanical frequency at zero charge.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct OmitParams {
    pub lambda_c_m: f64,
    pub cavity_length_m: f64,
    pub m_eff_kg: f64,
    pub omega_m_rad_s: f64,
    pub gamma_m_rad_s: f64,
    pub kappa_rad_s: f64,
    pub r0_m: f64,
    pub c_bias_f: f64,
    pub u_bias_v: f64,
    pub p_pump_w: f64,
    pub has_delta_c: bool,
    pub delta_c_rad_s: f64,
    pub coulomb_repulsive: bool,
}

impl From<&SystemParams> for OmitParams {
    fn from(p: &SystemParams) -> Self {
        let (has_delta_c, delta_c_rad_s) = match p.delta_c_policy {
            DetuningPolicy::Explicit(d) => (true, d),
            DetuningPolicy::ResonantAtZeroCharge => (false, 0.0),
        };
        Self {
            lambda_c_m: p.lambda_c,
            cavity_length_m: p.cavity_length,
            m_eff_kg: p.m_eff,
            omega_m_rad_s: p.omega_m,
            gamma_m_rad_s: p.gamma_m,
            kappa_rad_s: p.kappa,
            r0_m: p.r0,
            c_bias_f: p.c_bias,
            u_bias_v: p.u_bias,
            p_pump_w: p.p_pump,
            has_delta_c,
            delta_c_rad_s,
            coulomb_repulsive: p.coulomb_repulsive,
        }
    }
}

impl From<&OmitParams> for SystemParams {
    fn from(p: &OmitParams) -> Self {
        Self {
            lambda_c: p.lambda_c_m,
            cavity_length: p.cavity_length_m,
            m_eff: p.m_eff_kg,
            omega_m: p.omega_m_rad_s,
            gamma_m: p.gamma_m_rad_s,
            kappa: p.kappa_rad_s,
            r0: p.r0_m,
            c_bias: p.c_bias_f,
            u_bias: p.u_bias_v,
            p_pump: p.p_pump_w,
            n_charge: 0,
            delta_c_policy: if p.has_delta_c {
                DetuningPolicy::Explicit(p.delta_c_rad_s)
            } else {
                DetuningPolicy::ResonantAtZeroCharge
            },
            coulomb_repulsive: p.coulomb_repulsive,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmitSteadyState {
    pub q_s_m: f64,
    pub p_s: f64,
    pub c_s_re: f64,
    pub c_s_im: f64,
    pub n_photon: f64,
    pub delta_eff_rad_s: f64,
    pub beta: f64,
    pub real_root_count: u32,
    pub multistable: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmitTuningPoints {
    pub x_plus: f64,
    pub x_minus: f64,
    pub x_zero: f64,
    pub width: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmitChargeEstimate {
    pub n_hat: f64,
    pub n_int: u32,
    pub residual_rad_s: f64,
    pub ambiguous: bool,
    pub candidate_count: u32,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct OmitMetrics {
    pub min_force_n: f64,
    pub surface_density_per_cm2: f64,
}

/// Opaque model handle.
pub struct OmitModel {
    dp: DerivedParams,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

enum Failure {
    Null(&'static str),
    Core(OmitError),
}

impl From<OmitError> for Failure {
    fn from(e: OmitError) -> Self {
        Failure::Core(e)
    }
}

fn status_of(kind: ErrorKind) -> OmitStatus {
    match kind {
        ErrorKind::Config => OmitStatus::Config,
        ErrorKind::Domain => OmitStatus::Domain,
        ErrorKind::Convergence => OmitStatus::Convergence,
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> OmitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            OmitStatus::Ok
        }
        Ok(Err(Failure::Null(what))) => {
            set_last_error(&format!("null pointer: {what}"));
            OmitStatus::NullPointer
        }
        Ok(Err(Failure::Core(e))) => {
            set_last_error(&e.to_string());
            status_of(e.kind())
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(&format!("panic: {msg}"));
            OmitStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(p: *mut T, what: &'static str, value: T) -> Result<(), Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    p.write(value);
    Ok(())
}

/// Fills `out` with the reference parameter set (145 ng resonator, U = 1 V).
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_params_reference(out: *mut OmitParams) -> OmitStatus {
    guard(|| write(out, "out", OmitParams::from(&SystemParams::fig2())))
}

/// # Safety
/// `params` must be null or point to a valid `OmitParams`; `out` must be
/// null or valid for writes. The handle written to `out` must be released
/// with `omit_model_free`.
#[no_mangle]
pub unsafe extern "C" fn omit_model_new(
    params: *const OmitParams,
    out: *mut *mut OmitModel,
) -> OmitStatus {
    guard(|| {
        let p = SystemParams::from(deref(params, "params")?);
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let dp = derive(&p, &PhysicalConstants::default())?;
        write(out, "out", Box::into_raw(Box::new(OmitModel { dp })))
    })
}

/// Builds a model from a JSON config document (frequencies in Hz).
///
/// # Safety
/// `json` must be null or a NUL-terminated string; `out` as for
/// `omit_model_new`.
#[no_mangle]
pub unsafe extern "C" fn omit_model_from_config_json(
    json: *const c_char,
    out: *mut *mut OmitModel,
) -> OmitStatus {
    guard(|| {
        if json.is_null() {
            return Err(Failure::Null("json"));
        }
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| OmitError::Config(format!("config is not UTF-8: {e}")))?;
        let cfg = parse_config(text)?;
        let dp = derive(&cfg.params, &PhysicalConstants::default())?;
        write(out, "out", Box::into_raw(Box::new(OmitModel { dp })))
    })
}

/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn omit_model_free(model: *mut OmitModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Resolved bare pump-cavity detuning (rad/s).
///
/// # Safety
/// `model` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_model_delta_c(model: *const OmitModel, out: *mut f64) -> OmitStatus {
    guard(|| write(out, "out", deref(model, "model")?.dp.delta_c))
}

/// # Safety
/// `model` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_steady_state(
    model: *const OmitModel,
    n: u32,
    out: *mut OmitSteadyState,
) -> OmitStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let ss = solve_steady_state(&m.dp, n)?;
        write(
            out,
            "out",
            OmitSteadyState {
                q_s_m: ss.q_s,
                p_s: ss.p_s,
                c_s_re: ss.c_s.re,
                c_s_im: ss.c_s.im,
                n_photon: ss.n_photon,
                delta_eff_rad_s: ss.delta_eff,
                beta: ss.beta,
                real_root_count: ss.all_real_roots.len() as u32,
                multistable: ss.multistable,
            },
        )
    })
}

/// Exact probe quadrature at `x = delta - omega_m` for charge number `n`.
///
/// # Safety
/// `model` must be null or a live handle; `re` and `im` null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn omit_epsilon_t_exact(
    model: *const OmitModel,
    n: u32,
    x_rad_s: f64,
    re: *mut f64,
    im: *mut f64,
) -> OmitStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let ss = solve_steady_state(&m.dp, n)?;
        let e = epsilon_t_exact(&m.dp, &ss, m.dp.params.omega_m + x_rad_s)?;
        write(re, "re", e.re)?;
        write(im, "im", e.im)
    })
}

/// Closed-form near-resonance probe quadrature.
///
/// # Safety
/// `re` and `im` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_epsilon_t_approx(
    kappa: f64,
    gamma_m: f64,
    beta: f64,
    x_rad_s: f64,
    re: *mut f64,
    im: *mut f64,
) -> OmitStatus {
    guard(|| {
        if re.is_null() || im.is_null() {
            return Err(Failure::Null("re/im"));
        }
        let e = epsilon_t_approx(kappa, gamma_m, beta, x_rad_s);
        write(re, "re", e.re)?;
        write(im, "im", e.im)
    })
}

/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_tuning_points(
    kappa: f64,
    gamma_m: f64,
    beta: f64,
    out: *mut OmitTuningPoints,
) -> OmitStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let tp = tuning_points(kappa, gamma_m, beta)?;
        write(
            out,
            "out",
            OmitTuningPoints {
                x_plus: tp.x_plus,
                x_minus: tp.x_minus,
                x_zero: tp.x_zero,
                width: tp.width,
            },
        )
    })
}

/// Window width (rad/s) at a real-valued charge number.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_width_of_n(
    model: *const OmitModel,
    n: f64,
    out: *mut f64,
) -> OmitStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        write(out, "out", width_of_n(&m.dp, n)?)
    })
}

/// Inverts a measured width over `[n_min, n_max]`. When `candidates` is
/// non-null, up to `capacity` continuous preimages are written there.
///
/// # Safety
/// `model` must be null or a live handle; `out` null or valid for writes;
/// `candidates` null or valid for `capacity` writes.
#[no_mangle]
pub unsafe extern "C" fn omit_estimate_charge(
    model: *const OmitModel,
    width_rad_s: f64,
    n_min: u32,
    n_max: u32,
    out: *mut OmitChargeEstimate,
    candidates: *mut f64,
    capacity: usize,
) -> OmitStatus {
    guard(|| {
        let m = deref(model, "model")?;
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        let est = estimate_charge(&m.dp, width_rad_s, n_min, n_max)?;
        if !candidates.is_null() {
            for (i, c) in est.candidates.iter().take(capacity).enumerate() {
                candidates.add(i).write(c.n_hat);
            }
        }
        write(
            out,
            "out",
            OmitChargeEstimate {
                n_hat: est.n_hat,
                n_int: est.n_int,
                residual_rad_s: est.residual,
                ambiguous: est.ambiguous,
                candidate_count: est.candidates.len() as u32,
            },
        )
    })
}

/// # Safety
/// `model` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn omit_detection_metrics(
    model: *const OmitModel,
    out: *mut OmitMetrics,
) -> OmitStatus {
    guard(|| {
        let m = deref(model, "model")?;
        let d = detection_metrics(&m.dp);
        write(
            out,
            "out",
            OmitMetrics {
                min_force_n: d.min_force,
                surface_density_per_cm2: d.surface_density_sensitivity,
            },
        )
    })
}

/// Message of the last failed call on this thread, empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn omit_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn omit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params_round_trip() {
        let p = SystemParams::fig2();
        assert_eq!(SystemParams::from(&OmitParams::from(&p)), p);
        let q = SystemParams {
            delta_c_policy: DetuningPolicy::Explicit(3.0),
            ..p
        };
        assert_eq!(SystemParams::from(&OmitParams::from(&q)), q);
    }

    #[test]
    fn status_codes_match_exit_codes() {
        for kind in [ErrorKind::Config, ErrorKind::Domain, ErrorKind::Convergence] {
            assert_eq!(status_of(kind) as i32, kind.exit_code());
        }
    }

    #[test]
    fn panics_are_contained() {
        let s = guard(|| panic!("boom"));
        assert_eq!(s, OmitStatus::Panic);
        let msg = unsafe { CStr::from_ptr(omit_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "panic: boom");
    }
}
