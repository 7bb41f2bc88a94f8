//! C interface to `apofamily`.
//!
//! Every entry point returns an [`ApfStatus`]; results come back through out
//! pointers. On failure the message is available from [`apf_last_error`]
//! until the next call on the same thread. Handles and strings returned here
//! must be released with the matching `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apofamily::families::{self, FamilyParams};
use apofamily::identities::{self, sampling, TheoremId, VerifyOptions};
use apofamily::{MultiPoly, Rational};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Internal = 3,
}

/// Family parameters `(k, A, B, alpha, m, r)`.
pub struct ApfParams(FamilyParams);

/// An exact polynomial in `x, y, z` (or a subset).
pub struct ApfPoly(MultiPoly);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

type Failure = (ApfStatus, String);

fn invalid(msg: impl std::fmt::Display) -> Failure {
    (ApfStatus::InvalidArgument, msg.to_string())
}

/// Runs `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> ApfStatus
where
    F: FnOnce() -> Result<(), Failure>,
{
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ApfStatus::Internal
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err((ApfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| invalid(format!("{what} is not UTF-8")))
}

unsafe fn read_rational(p: *const c_char, what: &str) -> Result<Rational, Failure> {
    read_str(p, what)?.parse::<Rational>().map_err(|e| invalid(format!("{what}: {e}")))
}

fn check_out<T>(out: *mut *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err((ApfStatus::NullPointer, "output pointer is null".into()))
    } else {
        Ok(())
    }
}

fn string_out(s: String, out: *mut *mut c_char) -> Result<(), Failure> {
    check_out(out)?;
    let c = CString::new(s).map_err(|_| (ApfStatus::Internal, "string contains NUL".to_string()))?;
    unsafe { *out = c.into_raw() };
    Ok(())
}

fn poly_out(p: MultiPoly, out: *mut *mut ApfPoly) {
    unsafe { *out = Box::into_raw(Box::new(ApfPoly(p))) };
}

/// Message for the last failed call on this thread, or null. The pointer is
/// owned by the library.
#[no_mangle]
pub extern "C" fn apf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds a parameter handle. `a` and `b` are rationals written as `"p/q"`
/// or integers.
///
/// # Safety
/// `a` and `b` must be null or NUL-terminated strings; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn apf_params_new(
    k: u32,
    a: *const c_char,
    b: *const c_char,
    alpha: i64,
    m: u32,
    r: u32,
    out: *mut *mut ApfParams,
) -> ApfStatus {
    guard(|| {
        check_out(out)?;
        let a = read_rational(a, "A")?;
        let b = read_rational(b, "B")?;
        let p = FamilyParams::new(k, a, b, alpha, m, r).map_err(invalid)?;
        *out = Box::into_raw(Box::new(ApfParams(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`apf_params_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apf_params_free(p: *mut ApfParams) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// `P_n` for the given parameters, in `x, y, z`.
///
/// # Safety
/// `params` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apf_uateghp(params: *const ApfParams, n: u32, out: *mut *mut ApfPoly) -> ApfStatus {
    guard(|| {
        check_out(out)?;
        let p = params.as_ref().ok_or((ApfStatus::NullPointer, "params is null".to_string()))?;
        let poly = families::uateghp_poly(n as i64, &p.0).map_err(invalid)?;
        poly_out(poly, out);
        Ok(())
    })
}

fn positive(v: u32, what: &str) -> Result<(), Failure> {
    if v == 0 {
        Err(invalid(format!("{what} must be positive")))
    } else {
        Ok(())
    }
}

/// Gould-Hopper polynomial `H_n^{(m)}(x, y)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apf_gould_hopper(n: u32, m: u32, out: *mut *mut ApfPoly) -> ApfStatus {
    guard(|| {
        check_out(out)?;
        positive(m, "m")?;
        poly_out(families::gould_hopper(n, m), out);
        Ok(())
    })
}

/// Truncated exponential polynomial in `x, z`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apf_trunc_exp(n: u32, r: u32, out: *mut *mut ApfPoly) -> ApfStatus {
    guard(|| {
        check_out(out)?;
        positive(r, "r")?;
        poly_out(families::trunc_exp(n, r), out);
        Ok(())
    })
}

/// Three-variable truncated exponential Gould-Hopper polynomial.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apf_tegh_3v(n: u32, m: u32, r: u32, out: *mut *mut ApfPoly) -> ApfStatus {
    guard(|| {
        check_out(out)?;
        positive(m, "m")?;
        positive(r, "r")?;
        poly_out(families::tegh_3v(n, m, r), out);
        Ok(())
    })
}

/// Canonical text form, e.g. `x^3 + 6*x*y`. Free with [`apf_string_free`].
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apf_poly_to_string(poly: *const ApfPoly, out: *mut *mut c_char) -> ApfStatus {
    guard(|| {
        let p = poly.as_ref().ok_or((ApfStatus::NullPointer, "poly is null".to_string()))?;
        string_out(p.0.to_string(), out)
    })
}

/// Value at a rational point. Variables the polynomial does not use are
/// ignored. Free the result with [`apf_string_free`].
///
/// # Safety
/// `poly` must be a live handle; `x`, `y`, `z` NUL-terminated strings;
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn apf_poly_eval(
    poly: *const ApfPoly,
    x: *const c_char,
    y: *const c_char,
    z: *const c_char,
    out: *mut *mut c_char,
) -> ApfStatus {
    use apofamily::Var;
    guard(|| {
        let p = poly.as_ref().ok_or((ApfStatus::NullPointer, "poly is null".to_string()))?;
        let vals =
            [(Var::X, read_rational(x, "x")?), (Var::Y, read_rational(y, "y")?), (Var::Z, read_rational(z, "z")?)];
        let mut q = p.0.clone();
        for (v, val) in &vals {
            q = q.eval_var(*v, val);
        }
        string_out(q.constant_term().to_string(), out)
    })
}

/// # Safety
/// `p` must be null or a handle returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apf_poly_free(p: *mut ApfPoly) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Verifies `theorem` (e.g. `"T5_1"`, `"expansion"`) on the seeded sample
/// for `trial` and writes the JSON report. A printed-identity deviation is
/// still `Ok`; inspect the report's `status`.
///
/// # Safety
/// `theorem` must be a NUL-terminated string; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn apf_verify(
    theorem: *const c_char,
    seed: u64,
    trial: u32,
    order: u32,
    out_json: *mut *mut c_char,
) -> ApfStatus {
    guard(|| {
        check_out(out_json)?;
        let t: TheoremId = read_str(theorem, "theorem")?.parse().map_err(invalid)?;
        let sample = sampling::sample(t, seed, trial);
        let opts = VerifyOptions { order, ..VerifyOptions::default() };
        let report = identities::verify(t, &sample, &opts).map_err(|e| (ApfStatus::Internal, e.to_string()))?;
        string_out(report.to_json(), out_json)
    })
}
