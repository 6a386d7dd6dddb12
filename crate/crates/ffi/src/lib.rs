//! C interface to the syzrep library.
//!
//! Systems live behind an opaque handle. Every call returns a
//! [`SyzrepStatus`]; results come back as NUL-terminated JSON strings that
//! the caller releases with [`syzrep_string_free`]. The message of the most
//! recent failure on the calling thread is available from
//! [`syzrep_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use syzrep::cli::{self, AppendixTask, MuChoice, Outcome};
use syzrep::implicit::{GcdOptions, DEFAULT_SAMPLE_BUDGET};
use syzrep::system::AnySystem;
use syzrep::Error;

/// Status codes. The first four agree with the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyzrepStatus {
    Ok = 0,
    /// Malformed input, parse error or out-of-range argument.
    Invalid = 1,
    /// A standing hypothesis fails or a stabilization bound was hit.
    Hypothesis = 2,
    Internal = 3,
    /// A required pointer argument was null.
    NullArgument = 4,
    /// The call produced a result but one of its checks failed. The JSON
    /// output is still written.
    ChecksFailed = 5,
}

/// Opaque handle to a parsed system of forms.
pub struct SyzrepSystem {
    inner: AnySystem,
}

/// Pass as `mu` to use the threshold degree.
pub const SYZREP_MU_AUTO: i64 = -1;
/// Pass as `lmax` to keep every column degree.
pub const SYZREP_LMAX_NONE: i64 = -1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior NUL");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(e: &Error) -> SyzrepStatus {
    match e.exit_code() {
        1 => SyzrepStatus::Invalid,
        2 => SyzrepStatus::Hypothesis,
        _ => SyzrepStatus::Internal,
    }
}

fn guarded(f: impl FnOnce() -> Result<SyzrepStatus, (SyzrepStatus, String)>) -> SyzrepStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err((s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic".into());
            SyzrepStatus::Internal
        }
    }
}

fn fail(e: Error) -> (SyzrepStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SyzrepStatus, String) {
    (SyzrepStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (SyzrepStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (SyzrepStatus::Invalid, format!("{what} is not UTF-8")))
}

unsafe fn system<'a>(p: *const SyzrepSystem) -> Result<&'a AnySystem, (SyzrepStatus, String)> {
    p.as_ref().map(|s| &s.inner).ok_or_else(|| null("system"))
}

unsafe fn emit(out: *mut *mut c_char, r: syzrep::Result<Outcome>) -> Result<SyzrepStatus, (SyzrepStatus, String)> {
    let o = r.map_err(fail)?;
    let text =
        CString::new(serde_json::to_string(&o.payload).expect("JSON values serialize")).expect("JSON has no NUL");
    *out = text.into_raw();
    if o.ok {
        Ok(SyzrepStatus::Ok)
    } else {
        set_error("a check failed; see the JSON output".into());
        Ok(SyzrepStatus::ChecksFailed)
    }
}

fn mu_choice(mu: i64) -> Result<MuChoice, (SyzrepStatus, String)> {
    match mu {
        SYZREP_MU_AUTO => Ok(MuChoice::Auto),
        v => u32::try_from(v)
            .map(MuChoice::Value)
            .map_err(|_| (SyzrepStatus::Invalid, format!("mu must be -1 or a non-negative integer, got {v}"))),
    }
}

fn check_out(out: *mut *mut c_char) -> Result<(), (SyzrepStatus, String)> {
    if out.is_null() {
        Err(null("out"))
    } else {
        Ok(())
    }
}

/// Parse a system from its JSON description (fields `field`, `variables`,
/// `forms`). On success `*out` owns a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn syzrep_system_from_json(json: *const c_char, out: *mut *mut SyzrepSystem) -> SyzrepStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(json, "json")?;
        let inner = AnySystem::from_json(text).map_err(fail)?;
        *out = Box::into_raw(Box::new(SyzrepSystem { inner }));
        Ok(SyzrepStatus::Ok)
    })
}

/// # Safety
/// `sys` must come from [`syzrep_system_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn syzrep_system_free(sys: *mut SyzrepSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of variables, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn syzrep_system_nvars(sys: *const SyzrepSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.n())
}

/// Common degree of the forms, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn syzrep_system_degree(sys: *const SyzrepSystem) -> u32 {
    sys.as_ref().map_or(0, |s| s.inner.d())
}

/// Threshold report as JSON.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn syzrep_analyze(sys: *const SyzrepSystem, out: *mut *mut c_char) -> SyzrepStatus {
    guarded(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        emit(out, cli::analyze(system(sys)?))
    })
}

/// The matrix `M_mu` as JSON. `mu` may be [`SYZREP_MU_AUTO`]; `lmax` may be
/// [`SYZREP_LMAX_NONE`].
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn syzrep_matrix(
    sys: *const SyzrepSystem,
    mu: i64,
    lmax: i64,
    out: *mut *mut c_char,
) -> SyzrepStatus {
    guarded(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let lmax = match lmax {
            SYZREP_LMAX_NONE => None,
            v => Some(u32::try_from(v).map_err(|_| (SyzrepStatus::Invalid, format!("bad lmax {v}")))?),
        };
        emit(out, cli::matrix(system(sys)?, mu_choice(mu)?, lmax, false))
    })
}

/// Implicit equation extracted from `M_mu`, verified against the forms.
/// A `budget` of 0 selects the default number of colex minors.
///
/// # Safety
/// `sys` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn syzrep_implicitize(
    sys: *const SyzrepSystem,
    mu: i64,
    budget: usize,
    out: *mut *mut c_char,
) -> SyzrepStatus {
    guarded(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let opts = GcdOptions {
            sample_budget: if budget == 0 { DEFAULT_SAMPLE_BUDGET } else { budget },
            ..GcdOptions::default()
        };
        emit(out, cli::implicit(system(sys)?, mu_choice(mu)?, &opts))
    })
}

/// Truncated monomial algebra grids. `task` is one of `lefschetz` (a = n,
/// b = m), `signs` (a = n, b = d), `lemme` (a = m, b = t) or `kernel`
/// (a = m, b = t, c = N). Unused arguments are ignored.
///
/// # Safety
/// `task` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn syzrep_appendix(
    task: *const c_char,
    a: u32,
    b: u32,
    c: u32,
    out: *mut *mut c_char,
) -> SyzrepStatus {
    guarded(|| {
        check_out(out)?;
        *out = ptr::null_mut();
        let t = match read_str(task, "task")? {
            "lefschetz" => AppendixTask::Lefschetz { n: a as usize, m: b },
            "signs" => AppendixTask::Signs { n: a as usize, d: b },
            "lemme" => AppendixTask::Lemme { m: a, t: b },
            "kernel" => AppendixTask::Kernel { m: a, t: b, nilpotency: c },
            other => return Err((SyzrepStatus::Invalid, format!("unknown task '{other}'"))),
        };
        emit(out, cli::appendix(t))
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn syzrep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn syzrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn syzrep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
