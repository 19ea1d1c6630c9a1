//! C ABI for the tangency library.
//!
//! Families live behind an opaque `TangencyFamily*`; everything structured
//! crosses the boundary as JSON text. Strings returned by the library are owned
//! by the caller and released with `tangency_string_free`. Every entry point
//! returns a `TangencyStatus`; on failure `tangency_last_error` holds a message
//! for the calling thread. Handles are not thread-safe.

use std::cell::{OnceCell, RefCell};
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tangency::curve::{validate_family, Family, ValidationReport};
use tangency::gen::GeneratorSpec;
use tangency::verify;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TangencyStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Input parsed but violates the family hypotheses.
    InvalidFamily = 4,
    BadParameter = 5,
    Panic = 6,
}

/// Opaque family handle.
pub struct TangencyFamily {
    family: Family,
    checked: OnceCell<ValidationReport>,
}

impl TangencyFamily {
    fn new(family: Family) -> Box<Self> {
        Box::new(TangencyFamily { family, checked: OnceCell::new() })
    }

    fn report(&self) -> &ValidationReport {
        self.checked.get_or_init(|| validate_family(&self.family))
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: TangencyStatus, msg: impl Into<String>) -> TangencyStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> TangencyStatus) -> TangencyStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(TangencyStatus::Panic, msg)
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, TangencyStatus> {
    if s.is_null() {
        return Err(fail(TangencyStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|e| fail(TangencyStatus::InvalidUtf8, e.to_string()))
}

unsafe fn give_string(text: String, out: *mut *mut c_char) -> TangencyStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            TangencyStatus::Ok
        }
        Err(_) => fail(TangencyStatus::Panic, "interior NUL in output"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(TangencyStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message for the last failing call on this thread; empty if none.
/// Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tangency_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse a family from JSON (`{"curves":[{"id":..,"vertices":[..]}]}`).
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tangency_family_from_json(
    json: *const c_char,
    out: *mut *mut TangencyFamily,
) -> TangencyStatus {
    guard(|| {
        nonnull!(out);
        *out = ptr::null_mut();
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Family::from_json(text) {
            Ok(f) => {
                *out = Box::into_raw(TangencyFamily::new(f));
                TangencyStatus::Ok
            }
            Err(e) => fail(TangencyStatus::Parse, e.to_string()),
        }
    })
}

/// Build a generated family. `n`/`k` of 0 mean "not given".
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tangency_generate(
    name: *const c_char,
    n: usize,
    k: usize,
    seed: u64,
    out: *mut *mut TangencyFamily,
) -> TangencyStatus {
    guard(|| {
        nonnull!(out);
        *out = ptr::null_mut();
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let opt = |v: usize| (v != 0).then_some(v);
        match GeneratorSpec::from_parts(name, opt(n), opt(k), seed) {
            Ok(spec) => {
                *out = Box::into_raw(TangencyFamily::new(spec.generate()));
                TangencyStatus::Ok
            }
            Err(e) => fail(TangencyStatus::BadParameter, e.to_string()),
        }
    })
}

/// # Safety
/// `fam` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn tangency_family_free(fam: *mut TangencyFamily) {
    if !fam.is_null() {
        drop(Box::from_raw(fam));
    }
}

/// Number of curves, or 0 for null.
///
/// # Safety
/// `fam` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tangency_family_len(fam: *const TangencyFamily) -> usize {
    fam.as_ref().map_or(0, |f| f.family.len())
}

/// # Safety
/// `fam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tangency_family_to_json(fam: *const TangencyFamily, out: *mut *mut c_char) -> TangencyStatus {
    guard(|| {
        nonnull!(fam, out);
        give_string((*fam).family.to_json(), out)
    })
}

/// Validation report as JSON. Returns `InvalidFamily` (with the report still
/// written) when a hypothesis fails.
///
/// # Safety
/// `fam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tangency_validate(fam: *const TangencyFamily, out: *mut *mut c_char) -> TangencyStatus {
    guard(|| {
        nonnull!(fam, out);
        let rep = (*fam).report();
        let s = give_string(rep.to_json(), out);
        if s != TangencyStatus::Ok || rep.is_valid() {
            return s;
        }
        set_error(rep.violations.iter().map(|v| v.describe()).collect::<Vec<_>>().join("; "));
        TangencyStatus::InvalidFamily
    })
}

/// Number of touching pairs of a valid family.
///
/// # Safety
/// `fam` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tangency_count_tangencies(fam: *const TangencyFamily, out: *mut usize) -> TangencyStatus {
    guard(|| {
        nonnull!(fam, out);
        match &(*fam).report().valid {
            Some(v) => {
                *out = v.records.iter().filter(|r| r.kind == tangency::curve::Kind::Touching).count();
                TangencyStatus::Ok
            }
            None => fail(TangencyStatus::InvalidFamily, "family violates the hypotheses"),
        }
    })
}

/// Full analysis report as JSON; `*all_pass` (optional) is set to 1 when every
/// bound and proposition holds. Invalid families yield `InvalidFamily` and the
/// violations-only report.
///
/// # Safety
/// `fam` must be a live handle; `out` must be writable; `all_pass` may be null.
#[no_mangle]
pub unsafe extern "C" fn tangency_analyze(
    fam: *const TangencyFamily,
    out: *mut *mut c_char,
    all_pass: *mut i32,
) -> TangencyStatus {
    guard(|| {
        nonnull!(fam, out);
        let f = &*fam;
        let rep = match &f.report().valid {
            Some(v) => verify::analyze_valid(v, None),
            None => verify::analyze(&f.family),
        };
        if !all_pass.is_null() {
            *all_pass = rep.all_pass() as i32;
        }
        let s = give_string(rep.to_json(), out);
        if s == TangencyStatus::Ok && !rep.valid {
            return fail(TangencyStatus::InvalidFamily, "family violates the hypotheses");
        }
        s
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tangency_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
