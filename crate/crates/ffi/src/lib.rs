//! C ABI for `sadic`.
//!
//! A system is built from config text into an opaque `SadicSystem` handle.
//! Every analysis returns a status code and, on success, a heap-allocated
//! JSON string the caller releases with `sadic_string_free`. On failure the
//! message is available from `sadic_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sadic::coincidence::strong_coincidence;
use sadic::config::SystemConfig;
use sadic::language::balance;
use sadic::lyapunov::estimate_exponents;
use sadic::pipeline::run_verify;
use sadic::spectral::{rational_independence, right_eigenvector, DEFAULT_PARTIAL_QUOTIENT_CAP};
use sadic::Error;
use serde::Serialize;

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SadicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    PreconditionViolated = 4,
    Panic = 5,
}

/// Parsed system configuration. Opaque to C.
pub struct SadicSystem {
    config: SystemConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn status_of(e: &Error) -> SadicStatus {
    match e {
        Error::Config { .. }
        | Error::MalformedSubstitution(_)
        | Error::InvalidLetter(_)
        | Error::EmptyImage(_)
        | Error::InvalidModel(_) => SadicStatus::ConfigError,
        _ => SadicStatus::PreconditionViolated,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), SadicStatus>) -> SadicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SadicStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SadicStatus::Panic
        }
    }
}

fn fail(e: Error) -> SadicStatus {
    set_error(e.to_string());
    status_of(&e)
}

unsafe fn system<'a>(sys: *const SadicSystem) -> Result<&'a SadicSystem, SadicStatus> {
    if sys.is_null() {
        set_error("null system handle");
        return Err(SadicStatus::NullPointer);
    }
    Ok(&*sys)
}

unsafe fn emit<T: Serialize>(value: &T, out: *mut *mut c_char) -> Result<(), SadicStatus> {
    if out.is_null() {
        set_error("null output pointer");
        return Err(SadicStatus::NullPointer);
    }
    let text = serde_json::to_string(value).map_err(|e| {
        set_error(e.to_string());
        SadicStatus::Panic
    })?;
    *out = CString::new(text).expect("JSON has no NUL").into_raw();
    Ok(())
}

/// Parses config text into a new system handle stored in `*out`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_system_from_config(text: *const c_char, out: *mut *mut SadicSystem) -> SadicStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            set_error("null argument");
            return Err(SadicStatus::NullPointer);
        }
        *out = ptr::null_mut();
        let text = CStr::from_ptr(text).to_str().map_err(|_| {
            set_error("config text is not UTF-8");
            SadicStatus::InvalidUtf8
        })?;
        let config = SystemConfig::parse(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(SadicSystem { config }));
        Ok(())
    })
}

/// Releases a handle from `sadic_system_from_config`. Null is ignored.
///
/// # Safety
/// `sys` must come from `sadic_system_from_config` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sadic_system_free(sys: *mut SadicSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sadic_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the
/// next call into the library from this thread.
#[no_mangle]
pub extern "C" fn sadic_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sadic_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Full verify report as JSON.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_verify_json(sys: *const SadicSystem, out: *mut *mut c_char) -> SadicStatus {
    guard(|| {
        let s = system(sys)?;
        let report = run_verify(&s.config).map_err(fail)?;
        emit(&report, out)
    })
}

/// Balance certificate of the language shifted by `shift`, up to length `maxlen`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_balance_json(
    sys: *const SadicSystem,
    shift: usize,
    maxlen: usize,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let s = system(sys)?;
        let d = s.config.directive().map_err(fail)?;
        let cert = balance(&d, shift, maxlen, s.config.params.bound).map_err(fail)?;
        emit(&cert, out)
    })
}

/// Strong-coincidence verdict up to `cap`.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_coincidence_json(sys: *const SadicSystem, cap: usize, out: *mut *mut c_char) -> SadicStatus {
    guard(|| {
        let s = system(sys)?;
        let d = s.config.directive().map_err(fail)?;
        let verdict = strong_coincidence(&d, cap, false).map_err(fail)?;
        emit(&verdict, out)
    })
}

#[derive(Serialize)]
struct EigenOut {
    u: [f64; 2],
    u1_prime: f64,
    right: sadic::spectral::RightEigen,
    independence: sadic::spectral::Independence,
}

/// Generalized right eigenvector with the config's depth and tolerance.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_eigen_json(sys: *const SadicSystem, out: *mut *mut c_char) -> SadicStatus {
    guard(|| {
        let s = system(sys)?;
        let p = &s.config.params;
        let d = s.config.directive().map_err(fail)?;
        let right = right_eigenvector(&d, p.eigen_depth, p.tolerance, p.precision).map_err(fail)?;
        let u = right.best().clone();
        emit(
            &EigenOut {
                u: u.to_f64(),
                u1_prime: u.u1_prime(),
                independence: rational_independence(&u, DEFAULT_PARTIAL_QUOTIENT_CAP),
                right,
            },
            out,
        )
    })
}

/// Lyapunov estimate for the config's model.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn sadic_lyapunov_json(
    sys: *const SadicSystem,
    length: usize,
    samples: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> SadicStatus {
    guard(|| {
        let s = system(sys)?;
        let model = s.config.sequence_model().map_err(fail)?;
        let est = estimate_exponents(&model, length, samples, seed).map_err(fail)?;
        emit(&est, out)
    })
}
