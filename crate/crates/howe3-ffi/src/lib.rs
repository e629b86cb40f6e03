//! C interface to the howe3 toolkit.
//!
//! Every fallible call returns a [`Howe3Status`]; on failure the message is
//! kept per thread and read back with [`howe3_last_error`]. Handles are
//! opaque and must be released with their matching `_free` function.
//! Strings returned through out-parameters are owned by the caller and are
//! released with [`howe3_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use howe3::cli::{invariants_of, richelot_of, CurveInput};
use howe3::enumeration::{
    decide_exists, expected_extremality, method1_with, method2_with, method3_with, verify_extremality, ClassReport, Extremality, Kind, Options,
};
use howe3::field_tower::DEFAULT_MAX_LEVEL;
use howe3::Error;

/// Result codes. Values 2 and 3 agree with the command line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Howe3Status {
    Ok = 0,
    NullArgument = 1,
    InvalidInput = 2,
    LimitExceeded = 3,
    Internal = 4,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Howe3Kind {
    HoweType = 0,
    OortType = 1,
    Quartic = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Howe3Extremality {
    /// Use the extremality the report's kind predicts.
    Expected = 0,
    Maximal = 1,
    Minimal = 2,
}

/// Opaque class report.
pub struct Howe3Report(ClassReport);

/// Opaque parsed curve.
pub struct Howe3Curve(CurveInput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> Howe3Status {
    let status = if e.exit_code() == 3 { Howe3Status::LimitExceeded } else { Howe3Status::InvalidInput };
    set_error(format!("{}: {e}", e.kind()));
    status
}

fn null(what: &str) -> Howe3Status {
    set_error(format!("null argument: {what}"));
    Howe3Status::NullArgument
}

/// Runs `f`, turning panics into `Internal` and clearing the error slot on success.
fn guard(f: impl FnOnce() -> Howe3Status) -> Howe3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == Howe3Status::Ok {
                LAST_ERROR.with(|e| *e.borrow_mut() = None);
            }
            s
        }
        Err(p) => {
            let msg = p.downcast_ref::<&str>().map(|s| s.to_string()).or_else(|| p.downcast_ref::<String>().cloned());
            set_error(format!("internal error: {}", msg.unwrap_or_else(|| "panic".into())));
            Howe3Status::Internal
        }
    }
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Howe3Status> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        Howe3Status::InvalidInput
    })
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s).expect("JSON output has no nul bytes").into_raw();
}

fn kind_of(k: u32) -> Result<Kind, Howe3Status> {
    match k {
        0 => Ok(Kind::HoweType),
        1 => Ok(Kind::OortType),
        2 => Ok(Kind::Quartic),
        _ => {
            set_error(format!("unknown kind {k}"));
            Err(Howe3Status::InvalidInput)
        }
    }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn howe3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Enumerates the classes of one kind. `kind` is a `Howe3Kind` value;
/// `workers` = 0 means one worker.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn howe3_enumerate(p: u64, kind: u32, workers: u32, out: *mut *mut Howe3Report) -> Howe3Status {
    guard(|| {
        if out.is_null() {
            return null("out");
        }
        let kind = tri!(kind_of(kind));
        let opt = Options { workers: workers.max(1) as usize, ..Options::default() };
        let r = match kind {
            Kind::HoweType => method1_with(p, &opt),
            Kind::OortType => method2_with(p, &opt),
            Kind::Quartic => method3_with(p, &opt),
        };
        match r {
            Ok(r) => {
                *out = Box::into_raw(Box::new(Howe3Report(r)));
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses a report from JSON (a bare report or a full command document).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_from_json(json: *const c_char, out: *mut *mut Howe3Report) -> Howe3Status {
    guard(|| {
        let s = tri!(read_str(json, "json"));
        if out.is_null() {
            return null("out");
        }
        match howe3::cli::load_report(s) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(Howe3Report(r)));
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_free(r: *mut Howe3Report) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Number of classes in the report, or 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_total(r: *const Howe3Report) -> u64 {
    r.as_ref().map_or(0, |r| r.0.total())
}

/// Characteristic of the report, or 0 for NULL.
///
/// # Safety
/// `r` must be NULL or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_p(r: *const Howe3Report) -> u64 {
    r.as_ref().map_or(0, |r| r.0.p)
}

/// Classes (or, with `triples` nonzero, admissible triples) in a group
/// such as "V4" or "S4"; hyperelliptic reports have the single group "total".
///
/// # Safety
/// `r` must be a live handle, `group` a nul-terminated string, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_tally(r: *const Howe3Report, group: *const c_char, triples: u32, out: *mut u64) -> Howe3Status {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("report") };
        let g = tri!(read_str(group, "group"));
        if out.is_null() {
            return null("out");
        }
        *out = if triples != 0 { r.0.triple_tally(g) } else { r.0.tally(g) };
        Howe3Status::Ok
    })
}

/// Tagged curve text of class `index`, accepted by [`howe3_curve_parse`].
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_curve(r: *const Howe3Report, index: usize, out: *mut *mut c_char) -> Howe3Status {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("report") };
        if out.is_null() {
            return null("out");
        }
        match r.0.classes.get(index) {
            Some(c) => {
                write_string(out, c.tagged_curve());
                Howe3Status::Ok
            }
            None => {
                set_error(format!("class index {index} out of range ({} classes)", r.0.classes.len()));
                Howe3Status::InvalidInput
            }
        }
    })
}

/// Serializes the report as JSON.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_to_json(r: *const Howe3Report, out: *mut *mut c_char) -> Howe3Status {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("report") };
        if out.is_null() {
            return null("out");
        }
        write_string(out, serde_json::to_string_pretty(&r.0).expect("reports serialize"));
        Howe3Status::Ok
    })
}

/// Counts points of every class over the field where it should be extremal.
/// Sets `*all_ok` to 1 when every class has the extremal count, else 0.
///
/// # Safety
/// `r` must be a live handle and `all_ok` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_report_verify_extremality(r: *const Howe3Report, mode: u32, all_ok: *mut u32) -> Howe3Status {
    guard(|| {
        let Some(r) = r.as_ref() else { return null("report") };
        if all_ok.is_null() {
            return null("all_ok");
        }
        let mode = match mode {
            0 => expected_extremality(&r.0),
            1 => Extremality::Maximal,
            2 => Extremality::Minimal,
            m => {
                set_error(format!("unknown extremality mode {m}"));
                return Howe3Status::InvalidInput;
            }
        };
        match verify_extremality(&r.0, mode) {
            Ok(v) => {
                *all_ok = v.iter().all(|v| v.ok) as u32;
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Decides whether a class of the given kind exists. `*found` is set to 1 or
/// 0; when `witness` is not NULL and a class exists, its curve text is
/// written there.
///
/// # Safety
/// `found` must be writable; `witness` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_exists(p: u64, kind: u32, found: *mut u32, witness: *mut *mut c_char) -> Howe3Status {
    guard(|| {
        if found.is_null() {
            return null("found");
        }
        let kind = tri!(kind_of(kind));
        match decide_exists(p, kind) {
            Ok(w) => {
                *found = w.is_some() as u32;
                if let (Some(w), false) = (w, witness.is_null()) {
                    write_string(witness, w.tagged_curve());
                }
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses a curve in the command line's curve file format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_curve_parse(text: *const c_char, out: *mut *mut Howe3Curve) -> Howe3Status {
    guard(|| {
        let s = tri!(read_str(text, "text"));
        if out.is_null() {
            return null("out");
        }
        match CurveInput::parse(s) {
            Ok(c) => {
                *out = Box::into_raw(Box::new(Howe3Curve(c)));
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `c` must come from this library and not be used afterwards. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn howe3_curve_free(c: *mut Howe3Curve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Invariants of the curve as a JSON object.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_curve_invariants_json(c: *const Howe3Curve, out: *mut *mut c_char) -> Howe3Status {
    guard(|| {
        let Some(c) = c.as_ref() else { return null("curve") };
        if out.is_null() {
            return null("out");
        }
        match invariants_of(&c.0, DEFAULT_MAX_LEVEL) {
            Ok(o) => {
                write_string(out, serde_json::to_string(&o).expect("outputs serialize"));
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Richelot codomains of a genus-2 curve as a JSON object.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn howe3_curve_richelot_json(c: *const Howe3Curve, out: *mut *mut c_char) -> Howe3Status {
    guard(|| {
        let Some(c) = c.as_ref() else { return null("curve") };
        if out.is_null() {
            return null("out");
        }
        match richelot_of(&c.0) {
            Ok(o) => {
                write_string(out, serde_json::to_string(&o).expect("outputs serialize"));
                Howe3Status::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn howe3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
