//! C ABI over `jcm-core`.
//!
//! Every function returns a [`JcmStatus`]; results go through out-pointers.
//! On failure, [`jcm_last_error_message`] describes the error for the calling
//! thread. Models are opaque handles released with [`jcm_model_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use jcm_core::entanglement::ComplexMatrix4;
use jcm_core::evolution::MapEvaluator;
use jcm_core::{
    average_bloch, concurrence, entanglement_lower_bound, evolve_bloch, oracle_reduced_state,
    projection_weight, sample_moments, sample_series, time_average_closed_general,
    time_average_closed_resonant, time_average_numeric, BlochVector, JcmError, ModelParams,
    TruncationPolicy,
};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JcmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    BufferTooSmall = 3,
    InsufficientData = 4,
    Degenerate = 5,
    NotPositiveSemidefinite = 6,
    Internal = 7,
}

pub const JCM_TRUNCATION_FIXED: u32 = 0;
pub const JCM_TRUNCATION_ADAPTIVE: u32 = 1;

/// `order` is read for `JCM_TRUNCATION_FIXED`, `epsilon` for
/// `JCM_TRUNCATION_ADAPTIVE`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcmTruncation {
    pub kind: u32,
    pub order: usize,
    pub epsilon: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JcmBloch {
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JcmEvolutionMatrix {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JcmTimeAverages {
    pub avg_l1: f64,
    pub avg_l2: f64,
    pub avg_l3: f64,
    pub avg_l4: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JcmMoments {
    pub mu: f64,
    pub sigma2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JcmEntanglement {
    pub weight: f64,
    pub concurrence: f64,
    pub eof_normalized: f64,
    pub eof_lower_bound: f64,
}

/// Opaque model handle.
pub struct JcmModel {
    params: ModelParams,
    evaluator: MapEvaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &JcmError) -> JcmStatus {
    match err {
        JcmError::InvalidParameter { .. }
        | JcmError::AdaptiveAtInfiniteTemperature
        | JcmError::TruncationTooLarge { .. }
        | JcmError::NonMonotoneGrid { .. }
        | JcmError::ArcsineDomain(_)
        | JcmError::FockDimensionTooSmall { .. }
        | JcmError::ConcurrenceOutOfRange(_) => JcmStatus::InvalidArgument,
        JcmError::InsufficientData(_) => JcmStatus::InsufficientData,
        JcmError::Degenerate(_) => JcmStatus::Degenerate,
        JcmError::NotPositiveSemidefinite(_) => JcmStatus::NotPositiveSemidefinite,
    }
}

struct Failure(JcmStatus, String);

impl From<JcmError> for Failure {
    fn from(e: JcmError) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(JcmStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> JcmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => JcmStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            JcmStatus::Internal
        }
    }
}

fn truncation(t: &JcmTruncation) -> Result<TruncationPolicy, Failure> {
    Ok(match t.kind {
        JCM_TRUNCATION_FIXED => TruncationPolicy::fixed(t.order)?,
        JCM_TRUNCATION_ADAPTIVE => TruncationPolicy::adaptive(t.epsilon)?,
        other => {
            return Err(Failure(
                JcmStatus::InvalidArgument,
                format!("unknown truncation kind {other}"),
            ));
        }
    })
}

unsafe fn model_ref<'a>(model: *const JcmModel) -> Result<&'a JcmModel, Failure> {
    model.as_ref().ok_or_else(|| null("model"))
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

fn bloch(s: &JcmBloch) -> Result<BlochVector, Failure> {
    Ok(BlochVector::checked(s.sx, s.sy, s.sz)?)
}

fn to_c(s: BlochVector) -> JcmBloch {
    JcmBloch {
        sx: s.sx,
        sy: s.sy,
        sz: s.sz,
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn jcm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn jcm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates a model with field frequency `omega`, atomic frequency `omega0`
/// and coupling `g` (`hbar = 1`).
///
/// # Safety
/// `truncation` must be null or valid; `out` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_new(
    beta: f64,
    omega: f64,
    omega0: f64,
    g: f64,
    truncation: *const JcmTruncation,
    out: *mut *mut JcmModel,
) -> JcmStatus {
    guard(|| {
        let trunc = self::truncation(truncation.as_ref().ok_or_else(|| null("truncation"))?)?;
        let params = ModelParams::new(beta, omega, omega0, g, trunc)?;
        let evaluator = MapEvaluator::new(&params)?;
        let handle = Box::into_raw(Box::new(JcmModel { params, evaluator }));
        if out.is_null() {
            drop(Box::from_raw(handle));
            return Err(null("output pointer"));
        }
        out.write(handle);
        Ok(())
    })
}

/// Resonant model in reduced units (`omega = omega0 = g = 1`).
///
/// # Safety
/// See [`jcm_model_new`].
#[no_mangle]
pub unsafe extern "C" fn jcm_model_new_resonant(
    beta: f64,
    truncation: *const JcmTruncation,
    out: *mut *mut JcmModel,
) -> JcmStatus {
    jcm_model_new(beta, 1.0, 1.0, 1.0, truncation, out)
}

/// # Safety
/// `model` must be null or a handle from `jcm_model_new*` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn jcm_model_free(model: *mut JcmModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Map coefficients at time `t` (physical units of the model).
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_evolution_matrix(
    model: *const JcmModel,
    t: f64,
    out: *mut JcmEvolutionMatrix,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure(
                JcmStatus::InvalidArgument,
                format!("t must be finite and >= 0, got {t}"),
            ));
        }
        let e = m.evaluator.at(t);
        write(
            out,
            JcmEvolutionMatrix {
                l1: e.l1,
                l2: e.l2,
                l3: e.l3,
                l4: e.l4,
            },
        )
    })
}

/// `S(t)` from `S(0) = s0`.
///
/// # Safety
/// `model` must be a live handle, `s0` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_evolve_bloch(
    model: *const JcmModel,
    s0: *const JcmBloch,
    t: f64,
    out: *mut JcmBloch,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let s0 = bloch(s0.as_ref().ok_or_else(|| null("s0"))?)?;
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure(
                JcmStatus::InvalidArgument,
                format!("t must be finite and >= 0, got {t}"),
            ));
        }
        write(out, to_c(evolve_bloch(&s0, &m.evaluator.at(t))))
    })
}

/// Closed-form long-time averages of the map coefficients.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_time_averages(
    model: *const JcmModel,
    out: *mut JcmTimeAverages,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let a = if m.params.is_resonant() {
            time_average_closed_resonant(m.params.reduced_beta())?
        } else {
            time_average_closed_general(&m.params)?
        };
        write(
            out,
            JcmTimeAverages {
                avg_l1: a.avg_l1,
                avg_l2: a.avg_l2,
                avg_l3: a.avg_l3,
                avg_l4: a.avg_l4,
            },
        )
    })
}

/// Trapezoidal average of `S(t)` over `[0, t_max]`, together with the
/// closed-form prediction for the same `s0`.
///
/// # Safety
/// `model` must be a live handle, `s0` readable, `numeric` and `closed`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_time_average_numeric(
    model: *const JcmModel,
    s0: *const JcmBloch,
    t_max: f64,
    step: f64,
    numeric: *mut JcmBloch,
    closed: *mut JcmBloch,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let s0 = bloch(s0.as_ref().ok_or_else(|| null("s0"))?)?;
        let n = time_average_numeric(&s0, &m.params, t_max, step)?;
        let a = if m.params.is_resonant() {
            time_average_closed_resonant(m.params.reduced_beta())?
        } else {
            time_average_closed_general(&m.params)?
        };
        write(numeric, to_c(n))?;
        if !closed.is_null() {
            closed.write(to_c(average_bloch(&s0, &a)));
        }
        Ok(())
    })
}

/// Fills `values[0..n_samples]` with `S_z(k dt)` for `S(0) = 0`.
///
/// # Safety
/// `model` must be a live handle and `values` writable for `capacity`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn jcm_sample_series(
    model: *const JcmModel,
    dt: f64,
    n_samples: usize,
    values: *mut f64,
    capacity: usize,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        if values.is_null() {
            return Err(null("values"));
        }
        if capacity < n_samples {
            return Err(Failure(
                JcmStatus::BufferTooSmall,
                format!("buffer holds {capacity} values, need {n_samples}"),
            ));
        }
        let s = sample_series(&m.params, &BlochVector::ZERO, dt, n_samples)?;
        std::slice::from_raw_parts_mut(values, n_samples).copy_from_slice(&s.values);
        Ok(())
    })
}

/// Mean and variance of `S_z(k dt)`, `k = 0..n_samples`, for `S(0) = 0`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_sample_moments(
    model: *const JcmModel,
    dt: f64,
    n_samples: usize,
    out: *mut JcmMoments,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let s = sample_series(&m.params, &BlochVector::ZERO, dt, n_samples)?;
        let stats = sample_moments(&s)?;
        write(
            out,
            JcmMoments {
                mu: stats.mu,
                sigma2: stats.sigma2,
            },
        )
    })
}

/// Entanglement lower bound of the two-lowest-level projection, reduced
/// units, `S(0) = (1, 0, 0)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_entanglement_lower_bound(
    t: f64,
    beta: f64,
    out: *mut JcmEntanglement,
) -> JcmStatus {
    guard(|| {
        let r = entanglement_lower_bound(t, beta)?;
        write(
            out,
            JcmEntanglement {
                weight: r.weight,
                concurrence: r.concurrence,
                eof_normalized: r.eof_normalized,
                eof_lower_bound: r.eof_lower_bound,
            },
        )
    })
}

/// Trace of the unnormalized projection.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_projection_weight(t: f64, beta: f64, out: *mut f64) -> JcmStatus {
    guard(|| write(out, projection_weight(t, beta)?))
}

/// Wootters concurrence of a 4x4 density matrix given as 32 doubles,
/// row-major, real and imaginary parts interleaved.
///
/// # Safety
/// `rho` must be readable for 32 doubles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_concurrence(rho: *const f64, out: *mut f64) -> JcmStatus {
    guard(|| {
        if rho.is_null() {
            return Err(null("rho"));
        }
        let raw = std::slice::from_raw_parts(rho, 32);
        if raw.iter().any(|v| !v.is_finite()) {
            return Err(Failure(
                JcmStatus::InvalidArgument,
                "rho has non-finite entries".into(),
            ));
        }
        let mut m = ComplexMatrix4::zeros();
        for i in 0..4 {
            for j in 0..4 {
                let k = 2 * (4 * i + j);
                m[(i, j)] = Complex64::new(raw[k], raw[k + 1]);
            }
        }
        if !m.is_hermitian(1e-10) {
            return Err(Failure(
                JcmStatus::InvalidArgument,
                "rho is not Hermitian".into(),
            ));
        }
        write(out, concurrence(&m)?.concurrence)
    })
}

/// Atom Bloch vector from the exact truncated-Fock evolution.
///
/// # Safety
/// `model` must be a live handle, `s0` readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn jcm_oracle_bloch(
    model: *const JcmModel,
    s0: *const JcmBloch,
    t: f64,
    fock_dim: usize,
    out: *mut JcmBloch,
) -> JcmStatus {
    guard(|| {
        let m = model_ref(model)?;
        let s0 = bloch(s0.as_ref().ok_or_else(|| null("s0"))?)?;
        let state = oracle_reduced_state(&s0, t, &m.params, fock_dim)?;
        write(out, to_c(state.bloch))
    })
}
