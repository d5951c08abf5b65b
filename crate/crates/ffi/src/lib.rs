//! C ABI over `hopf_kh`. Diagrams are opaque handles; results come back as
//! JSON strings owned by the caller (release with `hk_string_free`).
//! Every function returns a status code; on failure `hk_last_error` gives a
//! message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use hopf_kh::cli::{cmd_alexander, cmd_jones, cmd_kh, resolve_input};
use hopf_kh::detector::detect_hopf;
use hopf_kh::homalg::Coeff;
use hopf_kh::koszul::khi_rank_bound;
use hopf_kh::library::DiagramLibrary;
use hopf_kh::linkdiag::LinkDiagram;
use hopf_kh::Error;

pub const HK_OK: c_int = 0;
pub const HK_NULL_POINTER: c_int = 1;
pub const HK_INVALID_UTF8: c_int = 2;
pub const HK_PARSE_ERROR: c_int = 3;
pub const HK_INVALID_ARGUMENT: c_int = 4;
pub const HK_COMPUTATION_ERROR: c_int = 5;
pub const HK_PANIC: c_int = 6;

pub const HK_COEFF_Z: c_int = 0;
pub const HK_COEFF_F2: c_int = 1;
pub const HK_COEFF_Q: c_int = 2;

/// Opaque link diagram.
pub struct HkDiagram {
    inner: LinkDiagram,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Failure(c_int, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::InvalidDiagram(_) | Error::UnknownDiagram(_) => HK_PARSE_ERROR,
            Error::ComponentOutOfRange { .. } | Error::DistinguishedComponent(_) | Error::Precondition(_) => {
                HK_INVALID_ARGUMENT
            }
            _ => HK_COMPUTATION_ERROR,
        };
        Failure(code, e.to_string())
    }
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> c_int {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            HK_OK
        }
        Ok(Err(Failure(code, msg))) => {
            set_error(&msg);
            code
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| p.downcast_ref::<&str>().copied())
                .unwrap_or("panic");
            set_error(msg);
            HK_PANIC
        }
    }
}

fn null() -> Failure {
    Failure(HK_NULL_POINTER, "null pointer argument".into())
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s).to_str().map_err(|e| Failure(HK_INVALID_UTF8, e.to_string()))
}

unsafe fn diagram<'a>(d: *const HkDiagram) -> Result<&'a LinkDiagram, Failure> {
    d.as_ref().map(|d| &d.inner).ok_or_else(null)
}

unsafe fn write<T>(out: *mut T, v: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(HK_COMPUTATION_ERROR, e.to_string()))?;
    write(out, c.into_raw())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure(HK_COMPUTATION_ERROR, e.to_string()))
}

unsafe fn new_handle(out: *mut *mut HkDiagram, d: LinkDiagram) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(Box::into_raw(Box::new(HkDiagram { inner: d })));
    Ok(())
}

/// Parses a PD code, diagram JSON, or library name.
///
/// # Safety
/// `input` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_diagram_parse(input: *const c_char, out: *mut *mut HkDiagram) -> c_int {
    guard(|| new_handle(out, resolve_input(text(input)?)?))
}

/// Looks up a built-in diagram by name.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_library_diagram(name: *const c_char, out: *mut *mut HkDiagram) -> c_int {
    guard(|| new_handle(out, DiagramLibrary::get(text(name)?)?))
}

/// # Safety
/// `d` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hk_diagram_free(d: *mut HkDiagram) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_diagram_component_count(d: *const HkDiagram, out: *mut usize) -> c_int {
    guard(|| write(out, diagram(d)?.component_count()))
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_linking_number(d: *const HkDiagram, i: usize, j: usize, out: *mut i64) -> c_int {
    guard(|| write(out, diagram(d)?.linking_number(i, j)?))
}

/// Khovanov homology as JSON. `component < 0` picks the distinguished
/// component when `reduced` is set.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_kh_json(
    d: *const HkDiagram,
    coeff: c_int,
    reduced: bool,
    component: i32,
    out: *mut *mut c_char,
) -> c_int {
    guard(|| {
        let coeff = match coeff {
            HK_COEFF_Z => Coeff::Z,
            HK_COEFF_F2 => Coeff::F2,
            HK_COEFF_Q => Coeff::Q,
            c => return Err(Failure(HK_INVALID_ARGUMENT, format!("unknown coefficient code {c}"))),
        };
        let component = usize::try_from(component).ok();
        write_string(out, json(&cmd_kh(diagram(d)?, coeff, reduced, component)?)?)
    })
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_jones_json(d: *const HkDiagram, out: *mut *mut c_char) -> c_int {
    guard(|| write_string(out, json(&cmd_jones(diagram(d)?)?)?))
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_alexander_json(d: *const HkDiagram, out: *mut *mut c_char) -> c_int {
    guard(|| write_string(out, json(&cmd_alexander(diagram(d)?)?)?))
}

/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_koszul_bound(d: *const HkDiagram, out: *mut usize) -> c_int {
    guard(|| write(out, khi_rank_bound(diagram(d)?)?))
}

/// Detection certificate as JSON.
///
/// # Safety
/// `d` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hk_detect_json(d: *const HkDiagram, out: *mut *mut c_char) -> c_int {
    guard(|| write_string(out, detect_hopf(diagram(d)?)?.to_json()))
}

/// # Safety
/// `s` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failing call on this thread, empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
