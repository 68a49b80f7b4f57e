//! C ABI over `conlat`. Instances are opaque handles created by
//! [`conlat_instance_parse`] or [`conlat_instance_fixture`] and released with
//! [`conlat_instance_free`]. Every call returns a [`ConlatStatus`]; on failure
//! the reason is available from [`conlat_last_error_message`] on the same
//! thread. Strings handed out must be released with [`conlat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use conlat::congruence::congruence_lattice;
use conlat::eon::{eon_lattice, EonMode, DEFAULT_EXHAUSTIVE_BOUND};
use conlat::fixtures::{fixture, Fixture};
use conlat::instance::Instance;
use conlat::model::verify_combined;
use conlat::monoid::DEFAULT_CLOSURE_BOUND;
use conlat::presentation::{present_combined, present_first, present_second};
use conlat::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConlatStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidInput = 4,
    CheckFailed = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConlatStyle {
    First = 0,
    Second = 1,
    Combined = 2,
}

/// Opaque semilattice-with-operators instance.
pub struct ConlatInstance {
    inner: Instance,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ConlatStatus {
    match e {
        Error::Parse { .. } => ConlatStatus::ParseError,
        Error::IsomorphismFailure(_)
        | Error::NoUpsilon(_)
        | Error::UnexpectedEndomorphism(_)
        | Error::ClosureFailure(_) => ConlatStatus::CheckFailed,
        _ => ConlatStatus::InvalidInput,
    }
}

fn fail(status: ConlatStatus, message: &str) -> ConlatStatus {
    set_error(message);
    status
}

fn guard(body: impl FnOnce() -> ConlatStatus) -> ConlatStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(ConlatStatus::Internal, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ConlatStatus> {
    if s.is_null() {
        return Err(fail(ConlatStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(ConlatStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn write_handle(out: *mut *mut ConlatInstance, inner: Instance) {
    *out = Box::into_raw(Box::new(ConlatInstance { inner }));
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
}

/// Message for the most recent failure on this thread, or null. Valid until
/// the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn conlat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses the text input format.
///
/// # Safety
/// `text` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_instance_parse(text: *const c_char, out: *mut *mut ConlatInstance) -> ConlatStatus {
    guard(|| {
        if out.is_null() {
            return fail(ConlatStatus::NullPointer, "null out pointer");
        }
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match Instance::parse(text, DEFAULT_CLOSURE_BOUND) {
            Ok(inst) => {
                write_handle(out, inst);
                ConlatStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Loads a built-in instance fixture such as `s22-swap` or `omega-4`.
///
/// # Safety
/// `name` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_instance_fixture(name: *const c_char, out: *mut *mut ConlatInstance) -> ConlatStatus {
    guard(|| {
        if out.is_null() {
            return fail(ConlatStatus::NullPointer, "null out pointer");
        }
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match fixture(name) {
            Ok(Fixture::Instance(inst)) => {
                write_handle(out, inst);
                ConlatStatus::Ok
            }
            Ok(_) => fail(ConlatStatus::InvalidInput, &format!("fixture {name} is not an instance")),
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conlat_instance_free(inst: *mut ConlatInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

unsafe fn with_instance(
    inst: *const ConlatInstance,
    out_ok: bool,
    body: impl FnOnce(&Instance) -> ConlatStatus,
) -> ConlatStatus {
    guard(|| {
        if inst.is_null() || !out_ok {
            return fail(ConlatStatus::NullPointer, "null argument");
        }
        body(&(*inst).inner)
    })
}

/// Carrier size of the semilattice.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_instance_size(inst: *const ConlatInstance, out: *mut usize) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        *out = i.semilattice.size();
        ConlatStatus::Ok
    })
}

/// Number of elements of the operator monoid, identity included.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_monoid_size(inst: *const ConlatInstance, out: *mut usize) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        *out = i.monoid.len();
        ConlatStatus::Ok
    })
}

/// Number of congruences.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_congruence_count(inst: *const ConlatInstance, out: *mut usize) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        *out = congruence_lattice(&i.semilattice, &i.monoid).len();
        ConlatStatus::Ok
    })
}

/// Number of eon relations.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_eon_count(inst: *const ConlatInstance, out: *mut usize) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        match eon_lattice(&i.semilattice, &i.monoid, EonMode::Auto, DEFAULT_EXHAUSTIVE_BOUND) {
            Ok(e) => {
                *out = e.len();
                ConlatStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Number of ideals of the semilattice.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn conlat_ideal_count(inst: *const ConlatInstance, out: *mut usize) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        *out = i.semilattice.ideals().len();
        ConlatStatus::Ok
    })
}

/// Renders a presentation in the text grammar. First and second styles
/// ignore the operators.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer. The result must
/// be released with [`conlat_string_free`].
#[no_mangle]
pub unsafe extern "C" fn conlat_present(
    inst: *const ConlatInstance,
    style: ConlatStyle,
    out: *mut *mut c_char,
) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| {
        let p = match style {
            ConlatStyle::First => Ok(present_first(&i.semilattice)),
            ConlatStyle::Second => Ok(present_second(&i.semilattice)),
            ConlatStyle::Combined => present_combined(&i.semilattice, &i.monoid),
        };
        match p {
            Ok(p) => {
                write_string(out, p.render());
                ConlatStatus::Ok
            }
            Err(e) => fail(status_of(&e), &e.to_string()),
        }
    })
}

/// Runs the combined free-structure pipeline. The `CHECK` report is written
/// to `out` whenever the pipeline runs; the status is `CHECK_FAILED` if any
/// check fails.
///
/// # Safety
/// `inst` must be a live handle and `out` a valid pointer. The result must
/// be released with [`conlat_string_free`].
#[no_mangle]
pub unsafe extern "C" fn conlat_verify_combined(inst: *const ConlatInstance, out: *mut *mut c_char) -> ConlatStatus {
    with_instance(inst, !out.is_null(), |i| match verify_combined(&i.semilattice, &i.monoid) {
        Ok(report) => {
            let passed = report.passed();
            write_string(out, report.render());
            if passed {
                ConlatStatus::Ok
            } else {
                fail(ConlatStatus::CheckFailed, "a check failed")
            }
        }
        Err(e) => fail(status_of(&e), &e.to_string()),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn conlat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_mapping() {
        let parse = Error::Parse {
            line: 1,
            column: 1,
            message: "x".into(),
        };
        assert_eq!(status_of(&parse), ConlatStatus::ParseError);
        assert_eq!(status_of(&Error::MissingProperty("reductive")), ConlatStatus::InvalidInput);
        assert_eq!(status_of(&Error::IsomorphismFailure("x".into())), ConlatStatus::CheckFailed);
    }

    #[test]
    fn panics_become_internal() {
        assert_eq!(guard(|| panic!("boom")), ConlatStatus::Internal);
        let msg = unsafe { CStr::from_ptr(conlat_last_error_message()) };
        assert_eq!(msg.to_str().unwrap(), "internal panic");
    }
}
