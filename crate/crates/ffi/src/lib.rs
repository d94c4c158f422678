//! C ABI for unirigid.
//!
//! Objects cross the boundary as opaque handles (`UrField`, `UrPol`,
//! `UrReport`) that the caller frees with the matching `*_free` function.
//! Every fallible call returns a `UrStatus`; on failure the message is kept
//! per thread and can be read with `ur_last_error`. Structured data (suite
//! configurations, solver decks, reports) is exchanged as JSON text, using
//! the same schema as the command line tool.
//!
//! Polynomials are given by coefficient arrays in ascending powers of
//! t^{-1}; each coefficient is the index of an F_q element, that is the
//! integer whose base-p digits are its coordinates.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use unirigid::bracket::BracketForm;
use unirigid::fq::{FqElem, FqField};
use unirigid::harness::{run_suite, solve_g2, solve_hp, ExperimentConfig, G2Deck, HeisDeck, HpDeck, SuiteReport};
use unirigid::poly::{eth_power_ratio_test, is_q_separable, Pol};
use unirigid::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UrStatus {
    Ok = 0,
    Parameter = 1,
    DivisionByZero = 2,
    Domain = 3,
    Window = 4,
    Hypothesis = 5,
    Unsupported = 6,
    Resource = 7,
    NotConformal = 8,
    Inconsistent = 9,
    Usage = 10,
    NullPointer = 11,
    InvalidUtf8 = 12,
    Json = 13,
    BufferTooSmall = 14,
    Panic = 15,
}

impl From<&Error> for UrStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parameter(_) => UrStatus::Parameter,
            Error::DivisionByZero => UrStatus::DivisionByZero,
            Error::Domain(_) => UrStatus::Domain,
            Error::Window(_) => UrStatus::Window,
            Error::Hypothesis(_) => UrStatus::Hypothesis,
            Error::Unsupported(_) => UrStatus::Unsupported,
            Error::Resource(_) => UrStatus::Resource,
            Error::NotConformal(_) => UrStatus::NotConformal,
            Error::Inconsistent(_) => UrStatus::Inconsistent,
            Error::Usage(_) => UrStatus::Usage,
        }
    }
}

struct Failure(UrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(UrStatus::from(&e), e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure(UrStatus::Json, e.to_string())
    }
}

/// A finite field F_q.
pub struct UrField {
    inner: FqField,
}

/// A polynomial in t^{-1} over the field it was created with.
pub struct UrPol {
    inner: Pol,
    p: u32,
    d: u32,
}

/// The outcome of a suite run.
pub struct UrReport {
    inner: SuiteReport,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> UrStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            UrStatus::Ok
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("internal panic: {msg}"));
            UrStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(UrStatus::NullPointer, format!("{what} is null"))
}

unsafe fn as_ref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn as_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(UrStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn to_c_string(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure(UrStatus::Parameter, "output contains a NUL byte".into()))
}

fn same_field(f: &FqField, pols: &[&UrPol]) -> Result<(), Failure> {
    if pols.iter().all(|a| a.p == f.p() && a.d == f.d()) {
        Ok(())
    } else {
        Err(Failure(UrStatus::Parameter, "polynomial belongs to a different field".into()))
    }
}

/// Message of the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ur_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ur_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates F_q with q = p^d.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ur_field_new(p: u32, d: u32, out: *mut *mut UrField) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let inner = FqField::new(p, d)?;
        *out = Box::into_raw(Box::new(UrField { inner }));
        Ok(())
    })
}

/// # Safety
/// `field` must be null or a handle from `ur_field_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ur_field_free(field: *mut UrField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Field size q, or 0 for a null handle.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ur_field_q(field: *const UrField) -> u32 {
    field.as_ref().map_or(0, |f| f.inner.q())
}

/// Builds a polynomial from `len` coefficient indices. Each index must be
/// below q.
///
/// # Safety
/// `coeffs` must point to `len` readable values (it may be null when `len`
/// is 0); `field` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_pol_new(
    field: *const UrField,
    coeffs: *const u32,
    len: usize,
    out: *mut *mut UrPol,
) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let f = &as_ref(field, "field")?.inner;
        let raw: &[u32] = if len == 0 {
            &[]
        } else if coeffs.is_null() {
            return Err(null("coeffs"));
        } else {
            std::slice::from_raw_parts(coeffs, len)
        };
        let c = raw.iter().map(|&i| f.check(FqElem::from_index(i))).collect::<Result<Vec<_>, _>>()?;
        let pol = UrPol { inner: Pol::from_coeffs(c), p: f.p(), d: f.d() };
        *out = Box::into_raw(Box::new(pol));
        Ok(())
    })
}

/// # Safety
/// `pol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ur_pol_free(pol: *mut UrPol) {
    if !pol.is_null() {
        drop(Box::from_raw(pol));
    }
}

/// Degree in t^{-1}; -1 for the zero polynomial.
///
/// # Safety
/// `pol` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_pol_degree(pol: *const UrPol, out: *mut i64) -> UrStatus {
    guard(|| {
        let a = as_ref(pol, "pol")?;
        *out_ptr(out, "out")? = a.inner.deg_minus().map_or(-1, |d| d as i64);
        Ok(())
    })
}

/// Copies the coefficient indices into `buf`. `len` always receives the
/// number of coefficients; if `cap` is too small nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `buf` must have room for `cap` values (or be null with `cap` 0); `pol`
/// must be live and `len` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_pol_coeffs(pol: *const UrPol, buf: *mut u32, cap: usize, len: *mut usize) -> UrStatus {
    guard(|| {
        let a = as_ref(pol, "pol")?;
        let c = a.inner.coeffs();
        *out_ptr(len, "len")? = c.len();
        if c.len() > cap {
            return Err(Failure(UrStatus::BufferTooSmall, format!("need room for {} coefficients", c.len())));
        }
        if !c.is_empty() {
            if buf.is_null() {
                return Err(null("buf"));
            }
            for (i, x) in c.iter().enumerate() {
                *buf.add(i) = x.index();
            }
        }
        Ok(())
    })
}

/// The bracket ⟨a, b⟩ = a^e·b − a·b^e; `e` must be 1 or a power of p.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_pol_bracket(
    field: *const UrField,
    e: u64,
    a: *const UrPol,
    b: *const UrPol,
    out: *mut *mut UrPol,
) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let f = &as_ref(field, "field")?.inner;
        let (a, b) = (as_ref(a, "a")?, as_ref(b, "b")?);
        same_field(f, &[a, b])?;
        let form = BracketForm::new(e, f)?;
        let pol = UrPol { inner: form.bracket(&a.inner, &b.inner), p: f.p(), d: f.d() };
        *out = Box::into_raw(Box::new(pol));
        Ok(())
    })
}

/// Whether b/a is an e-th power in F_q(t). Both must be nonzero.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_eth_power_ratio(
    field: *const UrField,
    a: *const UrPol,
    b: *const UrPol,
    e: u64,
    out: *mut bool,
) -> UrStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        let (a, b) = (as_ref(a, "a")?, as_ref(b, "b")?);
        same_field(f, &[a, b])?;
        *out_ptr(out, "out")? = eth_power_ratio_test(&a.inner, &b.inner, e, f)?;
        Ok(())
    })
}

/// Whether every irreducible factor of `a` has multiplicity below `qq`,
/// a power of p.
///
/// # Safety
/// All handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_is_q_separable(field: *const UrField, a: *const UrPol, qq: u64, out: *mut bool) -> UrStatus {
    guard(|| {
        let f = &as_ref(field, "field")?.inner;
        let a = as_ref(a, "a")?;
        same_field(f, &[a])?;
        *out_ptr(out, "out")? = is_q_separable(&a.inner, qq, f)?;
        Ok(())
    })
}

/// Runs a named suite. `config_json` is an experiment configuration in JSON;
/// missing keys (or a null pointer) take the defaults.
///
/// # Safety
/// `suite` must be a NUL-terminated string, `config_json` null or one, and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_run_suite(
    suite: *const c_char,
    config_json: *const c_char,
    out: *mut *mut UrReport,
) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let name = as_str(suite, "suite")?;
        let cfg: ExperimentConfig = if config_json.is_null() {
            ExperimentConfig::default()
        } else {
            serde_json::from_str(as_str(config_json, "config_json")?)?
        };
        let inner = run_suite(name, &cfg)?;
        *out = Box::into_raw(Box::new(UrReport { inner }));
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ur_report_free(report: *mut UrReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// Number of passing instances and of all instances.
///
/// # Safety
/// `report` must be live; `passed` and `total` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_report_counts(report: *const UrReport, passed: *mut usize, total: *mut usize) -> UrStatus {
    guard(|| {
        let r = &as_ref(report, "report")?.inner;
        *out_ptr(passed, "passed")? = r.passed;
        *out_ptr(total, "total")? = r.total;
        Ok(())
    })
}

/// The report as JSONL text (one record per line, then a summary line).
/// Free the string with `ur_string_free`.
///
/// # Safety
/// `report` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_report_jsonl(report: *const UrReport, out: *mut *mut c_char) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let r = &as_ref(report, "report")?.inner;
        let mut buf = Vec::new();
        r.write_jsonl(&mut buf).map_err(|e| Failure(UrStatus::Resource, e.to_string()))?;
        *out = to_c_string(String::from_utf8_lossy(&buf).into_owned())?;
        Ok(())
    })
}

/// Solves a deck given as JSON. `kind` is "g2", "heis" or "hp"; the
/// solution is returned as JSON text to be freed with `ur_string_free`.
///
/// # Safety
/// `kind` and `deck_json` must be NUL-terminated strings, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ur_solve(kind: *const c_char, deck_json: *const c_char, out: *mut *mut c_char) -> UrStatus {
    guard(|| {
        let out = out_ptr(out, "out")?;
        *out = ptr::null_mut();
        let deck = as_str(deck_json, "deck_json")?;
        let value = match as_str(kind, "kind")? {
            "g2" => serde_json::to_value(solve_g2(&serde_json::from_str::<G2Deck>(deck)?)?)?,
            "heis" => serde_json::to_value(serde_json::from_str::<HeisDeck>(deck)?.solve()?)?,
            "hp" => serde_json::to_value(solve_hp(&serde_json::from_str::<HpDeck>(deck)?)?)?,
            other => return Err(Failure(UrStatus::Usage, format!("unknown deck kind {other:?}"))),
        };
        *out = to_c_string(value.to_string())?;
        Ok(())
    })
}

/// Frees a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ur_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
