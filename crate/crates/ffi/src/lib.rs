//! C interface to `polydual`.
//!
//! Every function returns a [`PdStatus`]; on failure a message is available
//! from [`pd_last_error_message`] on the same thread. Families are opaque
//! handles released with [`pd_family_free`]; strings handed out are released
//! with [`pd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use polydual::analysis::{evaluate_lower, evaluate_upper, hypothesis_report, verify_main_theorem, SubsetMode};
use polydual::{dual_family, iterate_until_cycle, Error, Family, Vector};

/// Opaque family handle.
pub struct PdFamily {
    inner: Family,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON, numbers or family structure.
    InvalidInput = 3,
    /// Input is well formed but outside the operation's domain.
    Precondition = 4,
    /// An iteration, oracle or sampling limit was hit.
    LimitExceeded = 5,
    Internal = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PdEvalMode {
    /// Min over members of max over vertices.
    Upper = 0,
    /// Max over members of min over vertices.
    Lower = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PdStatus {
    match e {
        Error::DimensionMismatch { .. }
        | Error::EmptyInput(_)
        | Error::InvalidIndex { .. }
        | Error::MalformedPartition(_)
        | Error::InvalidFamily(_)
        | Error::Scalar(_)
        | Error::Json(_) => PdStatus::InvalidInput,
        Error::ZeroDirection | Error::NotExtreme { .. } | Error::Precondition(_) => PdStatus::Precondition,
        Error::OracleBound { .. } | Error::MaxIterations(_) | Error::RejectionBudget(_) => {
            PdStatus::LimitExceeded
        }
        Error::Internal(_) | Error::Io(_) => PdStatus::Internal,
    }
}

struct Failure(PdStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(PdStatus::Internal, e.to_string())
    }
}

/// Runs `body` behind a panic guard and records any failure.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> PdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            PdStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(PdStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(PdStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn family<'a>(f: *const PdFamily) -> Result<&'a Family, Failure> {
    f.as_ref().map(|h| &h.inner).ok_or_else(|| null("family"))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("JSON and numbers contain no nul bytes").into_raw()
}

fn boxed(f: Family) -> *mut PdFamily {
    Box::into_raw(Box::new(PdFamily { inner: f }))
}

/// Parses a family from JSON text
/// (`{"dimension": N, "points": [["p/q", ...], ...], "polytopes": [[i, ...], ...]}`).
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_from_json(json: *const c_char, out: *mut *mut PdFamily) -> PdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let f = Family::from_json(text)?;
        put(out, boxed(f), "out")
    })
}

/// Releases a family handle; null is ignored.
///
/// # Safety
/// `f` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_family_free(f: *mut PdFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Serializes a family to JSON; free the result with [`pd_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_to_json(f: *const PdFamily, out: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        put(out, to_c_string(f.to_json()), "out")
    })
}

/// Computes the dual family as a new handle.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_dual(f: *const PdFamily, out: *mut *mut PdFamily) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let d = dual_family(f)?;
        put(out, boxed(d), "out")
    })
}

/// Iterates the dual until a family repeats. `n0` receives the index of the
/// first family on the cycle and `k` the cycle length.
///
/// # Safety
/// `f` must be a live handle; `n0` and `k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_iterate(
    f: *const PdFamily,
    max_iter: usize,
    n0: *mut usize,
    k: *mut usize,
) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        if n0.is_null() || k.is_null() {
            return Err(null("n0 or k"));
        }
        let report = iterate_until_cycle(f, max_iter)?;
        put(n0, report.n0, "n0")?;
        put(k, report.k, "k")
    })
}

/// Writes the hypothesis report as JSON.
///
/// # Safety
/// `f` must be a live handle; `report_json` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_check(f: *const PdFamily, report_json: *mut *mut c_char) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        let json = serde_json::to_string(&hypothesis_report(f))?;
        put(report_json, to_c_string(json), "report_json")
    })
}

/// Computes three successive duals and checks their predicted structure.
/// `bottom_subsets` selects the weaker subset hypothesis. `report_json` may be
/// null when only the verdict is wanted.
///
/// # Safety
/// `f` must be a live handle; `passed` must be writable; `report_json` must
/// be null or writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_verify_theorem(
    f: *const PdFamily,
    bottom_subsets: bool,
    passed: *mut bool,
    report_json: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        if passed.is_null() {
            return Err(null("passed"));
        }
        let mode = if bottom_subsets {
            SubsetMode::BottomSubsets
        } else {
            SubsetMode::AllSubsets
        };
        let report = verify_main_theorem(f, mode)?;
        put(passed, report.passed, "passed")?;
        if !report_json.is_null() {
            report_json.write(to_c_string(serde_json::to_string(&report)?));
        }
        Ok(())
    })
}

/// Evaluates the family at `point` (comma-separated rationals such as
/// `"1,-1/2"`) and writes the exact value as a string like `"3/4"`.
///
/// # Safety
/// `f` must be a live handle, `point` nul-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pd_family_evaluate(
    f: *const PdFamily,
    mode: PdEvalMode,
    point: *const c_char,
    out: *mut *mut c_char,
) -> PdStatus {
    guard(|| {
        let f = family(f)?;
        let x: Vector = read_str(point, "point")?
            .parse()
            .map_err(|e: polydual::exact::ParseScalarError| Failure::from(Error::from(e)))?;
        let v = match mode {
            PdEvalMode::Upper => evaluate_upper(f, &x)?,
            PdEvalMode::Lower => evaluate_lower(f, &x)?,
        };
        put(out, to_c_string(v.to_string()), "out")
    })
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread; do not free it.
#[no_mangle]
pub extern "C" fn pd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn pd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
