use std::ffi::{c_char, CStr, CString};
use std::ptr;

use apofamily_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { apf_string_free(p) };
    s
}

fn last_error() -> String {
    let p = apf_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn render(poly: *mut ApfPoly) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { apf_poly_to_string(poly, &mut s) }, ApfStatus::Ok);
    unsafe { apf_poly_free(poly) };
    take_string(s)
}

#[test]
fn gould_hopper_through_c_api() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { apf_gould_hopper(3, 2, &mut p) }, ApfStatus::Ok);
    assert_eq!(render(p), "x^3 + 6*x*y");

    let mut p = ptr::null_mut();
    assert_eq!(unsafe { apf_trunc_exp(0, 2, &mut p) }, ApfStatus::Ok);
    assert_eq!(render(p), "1");

    let mut p = ptr::null_mut();
    assert_eq!(unsafe { apf_tegh_3v(2, 2, 1, &mut p) }, ApfStatus::Ok);
    let s = render(p);
    assert!(s.contains("x^2"), "{s}");
}

#[test]
fn bernoulli_type_members() {
    let a = CString::new("1").unwrap();
    let mut params = ptr::null_mut();
    assert_eq!(unsafe { apf_params_new(1, a.as_ptr(), a.as_ptr(), 1, 2, 1, &mut params) }, ApfStatus::Ok);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { apf_uateghp(params, 1, &mut p) }, ApfStatus::Ok);
    // P_1 at x = 0, y = 0, z = 0 is the first Bernoulli number.
    let zero = CString::new("0").unwrap();
    let mut v = ptr::null_mut();
    assert_eq!(unsafe { apf_poly_eval(p, zero.as_ptr(), zero.as_ptr(), zero.as_ptr(), &mut v) }, ApfStatus::Ok);
    assert_eq!(take_string(v), "-1/2");
    unsafe {
        apf_poly_free(p);
        apf_params_free(params);
    }
}

#[test]
fn errors_are_reported() {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { apf_gould_hopper(3, 0, &mut p) }, ApfStatus::InvalidArgument);
    assert!(last_error().contains('m'));
    assert!(p.is_null());
    assert_eq!(unsafe { apf_gould_hopper(3, 2, ptr::null_mut()) }, ApfStatus::NullPointer);

    let one = CString::new("1").unwrap();
    let junk = CString::new("1/0").unwrap();
    let mut params = ptr::null_mut();
    assert_eq!(
        unsafe { apf_params_new(1, one.as_ptr(), junk.as_ptr(), 1, 2, 1, &mut params) },
        ApfStatus::InvalidArgument
    );
    assert_eq!(unsafe { apf_params_new(1, ptr::null(), one.as_ptr(), 1, 2, 1, &mut params) }, ApfStatus::NullPointer);
    let zero = CString::new("0").unwrap();
    assert_eq!(
        unsafe { apf_params_new(0, zero.as_ptr(), one.as_ptr(), 1, 2, 1, &mut params) },
        ApfStatus::InvalidArgument
    );
    assert!(last_error().contains("A must be non-zero"));
    assert_eq!(
        unsafe { apf_params_new(0, one.as_ptr(), one.as_ptr(), 1, 0, 1, &mut params) },
        ApfStatus::InvalidArgument
    );
    assert_eq!(unsafe { apf_uateghp(ptr::null(), 1, &mut p) }, ApfStatus::NullPointer);

    let mut ok = ptr::null_mut();
    assert_eq!(unsafe { apf_gould_hopper(1, 1, &mut ok) }, ApfStatus::Ok);
    assert!(apf_last_error().is_null());
    unsafe { apf_poly_free(ok) };

    unsafe {
        apf_poly_free(ptr::null_mut());
        apf_params_free(ptr::null_mut());
        apf_string_free(ptr::null_mut());
    }
}

#[test]
fn verify_returns_deterministic_json() {
    let t = CString::new("T3_1").unwrap();
    let run = || {
        let mut s = ptr::null_mut();
        assert_eq!(unsafe { apf_verify(t.as_ptr(), 42, 0, 5, &mut s) }, ApfStatus::Ok);
        take_string(s)
    };
    let a = run();
    assert_eq!(a, run());
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["schema"], "1");
    assert_eq!(v["theorem"], "T3_1");
    assert_eq!(v["status"], "exact-pass");
    assert_eq!(v["oracle_status"], "oracle-pass");

    let bad = CString::new("T7_7").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { apf_verify(bad.as_ptr(), 1, 0, 4, &mut s) }, ApfStatus::InvalidArgument);
}

#[test]
fn header_lists_the_api() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/apofamily.h")).unwrap();
    for name in [
        "apf_params_new",
        "apf_params_free",
        "apf_uateghp",
        "apf_gould_hopper",
        "apf_trunc_exp",
        "apf_tegh_3v",
        "apf_poly_to_string",
        "apf_poly_eval",
        "apf_poly_free",
        "apf_string_free",
        "apf_verify",
        "apf_last_error",
        "typedef struct ApfPoly ApfPoly",
        "ApfStatus_InvalidArgument = 2",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
