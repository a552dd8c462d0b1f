use burnside_ffi::*;
use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

fn params(n: i64, lab: bool, tau: i64) -> *mut BurnsideParams {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { burnside_params_new(n, 2, lab, tau, &mut p) }, BurnsideStatus::Ok);
    p
}

fn parse(p: *const BurnsideParams, text: &str) -> *mut BurnsideWord {
    let c = CString::new(text).unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { burnside_word_parse(p, c.as_ptr(), &mut w) }, BurnsideStatus::Ok);
    w
}

fn render(w: *const BurnsideWord) -> String {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { burnside_word_to_string(w, true, &mut s) }, BurnsideStatus::Ok);
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { burnside_string_free(s) };
    out
}

#[test]
fn canonical_form_round_trip() {
    let p = params(593, false, 16);
    let w = parse(p, "a^900");
    let mut c = ptr::null_mut();
    let mut rank = 0;
    assert_eq!(unsafe { burnside_can(p, w, &mut c, &mut rank) }, BurnsideStatus::Ok);
    assert_eq!(render(c), "a^-286");
    assert_eq!(rank, 1);
    assert_eq!(unsafe { burnside_word_len(c) }, 286);
    let mut c1 = ptr::null_mut();
    assert_eq!(unsafe { burnside_can_r(p, w, 1, &mut c1) }, BurnsideStatus::Ok);
    assert!(unsafe { burnside_word_equal(c, c1) });
    unsafe {
        burnside_word_free(c1);
        burnside_word_free(c);
        burnside_word_free(w);
        burnside_params_free(p);
    }
}

#[test]
fn products_and_ranks() {
    let p = params(593, false, 16);
    let a = parse(p, "a^296");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { burnside_mult(p, a, a, 1, &mut out) }, BurnsideStatus::Ok);
    assert_eq!(render(out), "A");
    let ab = parse(p, "ab");
    let mut r = 0;
    assert_eq!(unsafe { burnside_classify_rank(p, ab, &mut r) }, BurnsideStatus::Ok);
    assert_eq!(r, 2);
    unsafe {
        burnside_word_free(out);
        burnside_word_free(ab);
        burnside_word_free(a);
        burnside_params_free(p);
    }
}

#[test]
fn error_codes() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { burnside_params_new(592, 2, false, 16, &mut p) },
        BurnsideStatus::InvalidParams
    );
    assert!(p.is_null());
    let msg = unsafe { CStr::from_ptr(burnside_last_error()) }.to_str().unwrap().to_string();
    assert!(msg.contains("even"));
    assert_eq!(
        unsafe { burnside_params_new(3, 2, false, 16, ptr::null_mut()) },
        BurnsideStatus::NullPointer
    );

    let p = params(3, true, 2);
    let bad = CString::new("c").unwrap();
    let mut w = ptr::null_mut();
    assert_eq!(unsafe { burnside_word_parse(p, bad.as_ptr(), &mut w) }, BurnsideStatus::ParseError);
    let aa = parse(p, "aa");
    let mut r = 0;
    assert_eq!(unsafe { burnside_classify_rank(p, aa, &mut r) }, BurnsideStatus::InvalidInput);
    unsafe {
        burnside_word_free(aa);
        burnside_params_free(p);
        burnside_word_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_interface() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/burnside.h");
    let text = std::fs::read_to_string(&header).expect("header is generated by the build script");
    for name in [
        "burnside_params_new",
        "burnside_params_free",
        "burnside_word_parse",
        "burnside_word_free",
        "burnside_word_to_string",
        "burnside_string_free",
        "burnside_can",
        "burnside_can_r",
        "burnside_mult",
        "burnside_classify_rank",
        "burnside_last_error",
        "BURNSIDE_STATUS_OK",
        "typedef struct BurnsideWord BurnsideWord",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
    // The header must also be valid C when a compiler is around.
    if let Ok(status) = Command::new("cc").args(["-fsyntax-only", "-x", "c"]).arg(&header).status() {
        assert!(status.success());
    }
}
