//! C ABI over `enumirror`.
//!
//! Every fallible call returns an [`EmStatus`]; on anything other than
//! `EM_STATUS_OK` the message is available from [`em_last_error`] on the same
//! thread. Strings handed out by the library are owned by the caller and
//! must be released with [`em_string_free`]. Handles are opaque and freed
//! with their matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use enumirror::cli::{self, Report, RunConfig};
use enumirror::qminv::{qm_series, qm_w0, InvariantKey, Role};
use enumirror::Error;
use num_integer::Integer;
use serde_json::json;

/// Status codes returned by every fallible function.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Config = 3,
    UnsupportedRank = 4,
    OutOfRange = 5,
    Domain = 6,
    Budget = 7,
    Convergence = 8,
    Inconsistency = 9,
    InvalidClass = 10,
    NotInSpan = 11,
    Arithmetic = 12,
    Panic = 99,
}

/// Which side of the mirror an invariant lives on.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmRole {
    Sl = 0,
    Pgl = 1,
}

/// Opaque invariant key.
pub struct EmKey(InvariantKey);

/// Opaque result of a check run.
pub struct EmReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> EmStatus {
    match e {
        Error::Config(_) => EmStatus::Config,
        Error::UnsupportedRank(_) => EmStatus::UnsupportedRank,
        Error::OutOfRange(_) => EmStatus::OutOfRange,
        Error::Domain(_) => EmStatus::Domain,
        Error::Budget { .. } => EmStatus::Budget,
        Error::Convergence(_) => EmStatus::Convergence,
        Error::Inconsistency(_) => EmStatus::Inconsistency,
        Error::InvalidClass(_) => EmStatus::InvalidClass,
        Error::NotInSpan(_) => EmStatus::NotInSpan,
        Error::ModulusMismatch(..) | Error::Denominator(_) => EmStatus::Arithmetic,
    }
}

struct Fail(EmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> EmStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EmStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            EmStatus::Panic
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(EmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail(EmStatus::InvalidUtf8, format!("{what}: {e}")))
}

fn to_c(s: String) -> *mut c_char {
    // interior NULs cannot occur in our JSON or decimal output
    CString::new(s).expect("no interior NUL").into_raw()
}

unsafe fn put<T>(out: *mut T, v: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    *out = v;
    Ok(())
}

/// Message for the last failing call on this thread, or NULL.
/// The pointer stays valid until the next call into the library.
#[no_mangle]
pub extern "C" fn em_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn em_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn em_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates an invariant key; `d` and `a` must lie in `0..r`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn em_key_new(role: EmRole, r: u32, g: u32, d: u32, a: u32, out: *mut *mut EmKey) -> EmStatus {
    guard(|| {
        let role = match role {
            EmRole::Sl => Role::SL,
            EmRole::Pgl => Role::PGL,
        };
        let key = InvariantKey::new(role, r, g, d, a)?;
        put(out, Box::into_raw(Box::new(EmKey(key))), "out")
    })
}

/// # Safety
/// `key` must come from [`em_key_new`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn em_key_free(key: *mut EmKey) {
    if !key.is_null() {
        drop(Box::from_raw(key));
    }
}

/// q-expansion of the invariant up to and including `order`, as JSON:
/// `{"terms": [{"exponent": "n" | "n/m", "coeff": "..."}]}`.
///
/// # Safety
/// `key` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn em_key_series_json(key: *const EmKey, order: i64, out: *mut *mut c_char) -> EmStatus {
    guard(|| {
        let key = key.as_ref().ok_or_else(|| null("key"))?;
        if order < 0 {
            return Err(Fail(EmStatus::OutOfRange, format!("order {order} is negative")));
        }
        let s = qm_series(&key.0)?.expand(order + 1)?;
        let den = s.denom();
        let terms: Vec<_> = s
            .terms()
            .map(|(k, c)| {
                let g = k.gcd(&den);
                let e = if den / g == 1 { format!("{}", k / g) } else { format!("{}/{}", k / g, den / g) };
                json!({ "exponent": e, "coeff": c.to_string() })
            })
            .collect();
        put(out, to_c(json!({ "terms": terms }).to_string()), "out")
    })
}

/// Degree-zero coefficient of the invariant as decimal numerator and
/// denominator strings.
///
/// # Safety
/// `key` must be a live handle; `num` and `den` writable.
#[no_mangle]
pub unsafe extern "C" fn em_key_w0(key: *const EmKey, num: *mut *mut c_char, den: *mut *mut c_char) -> EmStatus {
    guard(|| {
        let key = key.as_ref().ok_or_else(|| null("key"))?;
        if num.is_null() || den.is_null() {
            return Err(null("num/den"));
        }
        let v = qm_w0(&key.0)?;
        *num = to_c(v.numer().to_string());
        *den = to_c(v.denom().to_string());
        Ok(())
    })
}

/// Runs checks described by a JSON config (same fields as the CLI, all
/// optional; `{}` runs everything at the defaults).
///
/// # Safety
/// `config_json` must be a NUL-terminated string; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn em_run(config_json: *const c_char, out: *mut *mut EmReport) -> EmStatus {
    guard(|| {
        let text = read_str(config_json, "config_json")?;
        let config: RunConfig =
            serde_json::from_str(text).map_err(|e| Fail(EmStatus::Config, format!("invalid config: {e}")))?;
        let report = cli::run(&config)?;
        put(out, Box::into_raw(Box::new(EmReport(report))), "out")
    })
}

/// # Safety
/// `report` must come from [`em_run`] and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn em_report_free(report: *mut EmReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Full report as JSON (the CLI's `--report json` output).
///
/// # Safety
/// `report` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn em_report_json(report: *const EmReport, out: *mut *mut c_char) -> EmStatus {
    guard(|| {
        let r = report.as_ref().ok_or_else(|| null("report"))?;
        put(out, to_c(r.0.to_json()), "out")
    })
}

/// Counts of passing, failing and undecided checks. Any pointer may be NULL.
///
/// # Safety
/// `report` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn em_report_counts(
    report: *const EmReport,
    pass: *mut usize,
    fail: *mut usize,
    unknown: *mut usize,
) -> EmStatus {
    guard(|| {
        let s = &report.as_ref().ok_or_else(|| null("report"))?.0.summary;
        for (p, v) in [(pass, s.pass), (fail, s.fail), (unknown, s.unknown)] {
            if !p.is_null() {
                *p = v;
            }
        }
        Ok(())
    })
}

/// Process exit code the CLI would use: 0 if nothing failed, 1 otherwise.
/// Returns -1 for a NULL handle.
///
/// # Safety
/// `report` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn em_report_exit_code(report: *const EmReport) -> i32 {
    report.as_ref().map_or(-1, |r| r.0.exit_code())
}
