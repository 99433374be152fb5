//! C ABI over the `gaussclone` library.
//!
//! Every function returns a [`GcStatus`]. Results go through out-pointers,
//! which are written only on success. On failure, a description is available
//! from [`gc_last_error_message`] on the same thread. States are opaque
//! [`GcState`] handles released with [`gc_state_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gaussclone::cloner::{gain_select, run_averaged, run_single_shot, CloneTarget, ClonerConfig};
use gaussclone::comm::{average_error_probability, Method};
use gaussclone::fidelity::{
    enhancement, gaussian_fidelity, optimal_ancilla_squeezing, symmetric_cloning_fidelity,
};
use gaussclone::gaussian::{GaussianMeasurement, GaussianState};
use gaussclone::Error;
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

/// Outcome of an FFI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullPointer = 1,
    Range = 2,
    Dimension = 3,
    Index = 4,
    SingularMatrix = 5,
    Shape = 6,
    Unphysical = 7,
    Truncation = 8,
    Budget = 9,
    Parse = 10,
    Panic = 11,
}

/// Which input the cloner should copy.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcCloneTarget {
    First = 1,
    Second = 2,
}

/// Estimator for the average communication error.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GcMethod {
    Quadrature = 0,
    MonteCarlo = 1,
}

/// Cloner settings. The measurement is heterodyne with efficiency `eta`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct GcClonerParams {
    pub tau1: f64,
    pub tau2: f64,
    pub gain: f64,
    pub eta: f64,
}

/// Opaque Gaussian state handle.
pub struct GcState {
    inner: GaussianState,
}

enum Failure {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GcStatus {
    match e {
        Error::Range { .. } => GcStatus::Range,
        Error::Dimension { .. } => GcStatus::Dimension,
        Error::Index { .. } => GcStatus::Index,
        Error::SingularMatrix { .. } => GcStatus::SingularMatrix,
        Error::Shape(_) => GcStatus::Shape,
        Error::Unphysical(_) => GcStatus::Unphysical,
        Error::Truncation { .. } => GcStatus::Truncation,
        Error::Budget(_) => GcStatus::Budget,
        Error::Parse { .. } => GcStatus::Parse,
    }
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            GcStatus::Ok
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Null(name))) => {
            set_last_error(&format!("null pointer passed as `{name}`"));
            GcStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic");
            GcStatus::Panic
        }
    }
}

unsafe fn state_ref<'a>(
    p: *const GcState,
    name: &'static str,
) -> Result<&'a GaussianState, Failure> {
    p.as_ref().map(|s| &s.inner).ok_or(Failure::Null(name))
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or(Failure::Null(name))
}

unsafe fn matrix2(p: *const f64, name: &'static str) -> Result<Matrix2<f64>, Failure> {
    if p.is_null() {
        return Err(Failure::Null(name));
    }
    let s = std::slice::from_raw_parts(p, 4);
    Ok(Matrix2::new(s[0], s[1], s[2], s[3]))
}

fn boxed(state: GaussianState) -> *mut GcState {
    Box::into_raw(Box::new(GcState { inner: state }))
}

unsafe fn emit(out: *mut *mut GcState, state: GaussianState) -> Result<(), Failure> {
    *out_ref(out, "out")? = boxed(state);
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Single-mode vacuum.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gc_state_vacuum(out: *mut *mut GcState) -> GcStatus {
    guard(|| emit(out, GaussianState::vacuum()))
}

/// Coherent state with amplitude `re + i im`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gc_state_coherent(re: f64, im: f64, out: *mut *mut GcState) -> GcStatus {
    guard(|| {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Range {
                name: "alpha",
                value: if re.is_finite() { im } else { re },
                allowed: "finite",
            }
            .into());
        }
        emit(out, GaussianState::coherent(Complex64::new(re, im)))
    })
}

/// Squeezed coherent state `D(α)S(r)|0⟩`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gc_state_squeezed(
    re: f64,
    im: f64,
    r: f64,
    out: *mut *mut GcState,
) -> GcStatus {
    guard(|| {
        emit(
            out,
            GaussianState::squeezed_coherent(Complex64::new(re, im), r)?,
        )
    })
}

/// Zero-mean squeezed thermal state.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn gc_state_squeezed_thermal(
    n_thermal: f64,
    s: f64,
    out: *mut *mut GcState,
) -> GcStatus {
    guard(|| emit(out, GaussianState::squeezed_thermal(n_thermal, s)?))
}

/// State from a mean of length `2 n_modes` and a row-major covariance of
/// `(2 n_modes)²` entries.
///
/// # Safety
/// `mean` and `cov` must point to arrays of the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn gc_state_from_moments(
    n_modes: usize,
    mean: *const f64,
    cov: *const f64,
    out: *mut *mut GcState,
) -> GcStatus {
    guard(|| {
        if mean.is_null() {
            return Err(Failure::Null("mean"));
        }
        if cov.is_null() {
            return Err(Failure::Null("cov"));
        }
        let dim = n_modes
            .checked_mul(2)
            .filter(|&d| d > 0 && d <= 4096)
            .ok_or(Error::Dimension {
                expected: 2,
                found: n_modes,
            })?;
        let mean = std::slice::from_raw_parts(mean, dim);
        let cov = std::slice::from_raw_parts(cov, dim * dim);
        let state = GaussianState::from_moments(mean, DMatrix::from_row_slice(dim, dim, cov))?;
        emit(out, state)
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `state` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_state_free(state: *mut GcState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes of `state`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_state_n_modes(state: *const GcState, out: *mut usize) -> GcStatus {
    guard(|| {
        *out_ref(out, "out")? = state_ref(state, "state")?.n_modes();
        Ok(())
    })
}

/// Copies the mean vector (`2 n_modes` entries) into `buf`.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gc_state_mean(
    state: *const GcState,
    buf: *mut f64,
    len: usize,
) -> GcStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        copy_out(s.mean().as_slice(), buf, len)
    })
}

/// Copies the covariance matrix, row-major, into `buf`.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gc_state_cov(
    state: *const GcState,
    buf: *mut f64,
    len: usize,
) -> GcStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        // Symmetric, so column-major storage reads the same row-major.
        copy_out(s.cov().as_slice(), buf, len)
    })
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure::Null("buf"));
    }
    if len != src.len() {
        return Err(Error::Dimension {
            expected: src.len(),
            found: len,
        }
        .into());
    }
    ptr::copy_nonoverlapping(src.as_ptr(), buf, len);
    Ok(())
}

/// JSON form of a state; release with [`gc_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_state_to_json(
    state: *const GcState,
    out: *mut *mut c_char,
) -> GcStatus {
    guard(|| {
        let s = state_ref(state, "state")?;
        let text = serde_json::to_string(s).expect("states always serialize");
        *out_ref(out, "out")? = CString::new(text).expect("JSON has no NUL").into_raw();
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn cloner_config(
    params: *const GcClonerParams,
    ancilla: *const GcState,
) -> Result<ClonerConfig, Failure> {
    let p = params.as_ref().ok_or(Failure::Null("params"))?;
    let ancilla = if ancilla.is_null() {
        GaussianState::vacuum()
    } else {
        state_ref(ancilla, "ancilla")?.clone()
    };
    Ok(ClonerConfig::new(
        p.tau1,
        p.tau2,
        p.gain,
        GaussianMeasurement::heterodyne(p.eta)?,
        ancilla,
    )?)
}

/// Outcome-averaged clones. A null `ancilla` means vacuum.
///
/// # Safety
/// Pointers other than `ancilla` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_run_averaged(
    rho1: *const GcState,
    rho2: *const GcState,
    params: *const GcClonerParams,
    ancilla: *const GcState,
    out_clone1: *mut *mut GcState,
    out_clone2: *mut *mut GcState,
) -> GcStatus {
    guard(|| {
        let cfg = cloner_config(params, ancilla)?;
        out_ref(out_clone1, "out_clone1")?;
        out_ref(out_clone2, "out_clone2")?;
        let res = run_averaged(state_ref(rho1, "rho1")?, state_ref(rho2, "rho2")?, &cfg)?;
        emit(out_clone1, res.clone1)?;
        emit(out_clone2, res.clone2)
    })
}

/// Clones conditioned on heterodyne outcome `z = z_re + i z_im`, with the
/// outcome density written to `out_density`.
///
/// # Safety
/// Pointers other than `ancilla` must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gc_run_single_shot(
    rho1: *const GcState,
    rho2: *const GcState,
    params: *const GcClonerParams,
    ancilla: *const GcState,
    z_re: f64,
    z_im: f64,
    out_clone1: *mut *mut GcState,
    out_clone2: *mut *mut GcState,
    out_density: *mut f64,
) -> GcStatus {
    guard(|| {
        let cfg = cloner_config(params, ancilla)?;
        out_ref(out_clone1, "out_clone1")?;
        out_ref(out_clone2, "out_clone2")?;
        let density = out_ref(out_density, "out_density")?;
        let (res, p) = run_single_shot(
            state_ref(rho1, "rho1")?,
            state_ref(rho2, "rho2")?,
            &cfg,
            Complex64::new(z_re, z_im),
        )?;
        *density = p;
        emit(out_clone1, res.clone1)?;
        emit(out_clone2, res.clone2)
    })
}

/// Gain that makes the machine copy `target` at transmissivity `tau1`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_gain_select(
    target: GcCloneTarget,
    tau1: f64,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let t = match target {
            GcCloneTarget::First => CloneTarget::First,
            GcCloneTarget::Second => CloneTarget::Second,
        };
        *out_ref(out, "out")? = gain_select(t, tau1)?;
        Ok(())
    })
}

/// Fidelity between two single-mode Gaussian states.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_gaussian_fidelity(
    a: *const GcState,
    b: *const GcState,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        *out_ref(out, "out")? = gaussian_fidelity(state_ref(a, "a")?, state_ref(b, "b")?)?.fidelity;
        Ok(())
    })
}

/// Symmetric cloning fidelity from three row-major 2×2 covariances.
///
/// # Safety
/// Each matrix pointer must hold 4 doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_symmetric_cloning_fidelity(
    sigma_k: *const f64,
    sigma_3: *const f64,
    sigma_m: *const f64,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let f = symmetric_cloning_fidelity(
            &matrix2(sigma_k, "sigma_k")?,
            &matrix2(sigma_3, "sigma_3")?,
            &matrix2(sigma_m, "sigma_m")?,
        )?;
        *out_ref(out, "out")? = f;
        Ok(())
    })
}

/// Closed-form optimal ancilla squeezing for diagonal covariances.
///
/// # Safety
/// Each matrix pointer must hold 4 doubles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_optimal_ancilla_squeezing(
    sigma_k: *const f64,
    sigma_m: *const f64,
    out: *mut f64,
) -> GcStatus {
    guard(|| {
        let s = optimal_ancilla_squeezing(
            &matrix2(sigma_k, "sigma_k")?,
            &matrix2(sigma_m, "sigma_m")?,
        )?;
        *out_ref(out, "out")? = s;
        Ok(())
    })
}

/// Relative fidelity gain of the optimal ancilla for squeezing `r`.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_enhancement(r: f64, eta: f64, out: *mut f64) -> GcStatus {
    guard(|| {
        *out_ref(out, "out")? = enhancement(r, eta)?;
        Ok(())
    })
}

/// Average error probability of the binary protocol. `budget` is the
/// quadrature order or the Monte Carlo sample count.
///
/// # Safety
/// Output pointers must be valid.
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn gc_average_error_probability(
    alpha: f64,
    eta: f64,
    epsilon: f64,
    method: GcMethod,
    budget: usize,
    seed: u64,
    out_value: *mut f64,
    out_abs_error: *mut f64,
) -> GcStatus {
    guard(|| {
        let value = out_ref(out_value, "out_value")?;
        let err = out_ref(out_abs_error, "out_abs_error")?;
        let m = match method {
            GcMethod::Quadrature => Method::Quadrature,
            GcMethod::MonteCarlo => Method::MonteCarlo,
        };
        let est = average_error_probability(alpha, eta, epsilon, m, budget, Some(seed))?;
        *value = est.value;
        *err = est.abs_error;
        Ok(())
    })
}
