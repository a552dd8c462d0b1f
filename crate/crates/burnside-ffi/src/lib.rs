//! C interface. Handles are opaque and owned by the caller; every call returns a status code
//! and the message of the last failure on this thread is kept for `burnside_last_error`.

use burnside::relators::classify_rank;
use burnside::{can, can_r, mult_r, Error, Mode, Params, Word};
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

/// Result of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BurnsideStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParams = 3,
    ParseError = 4,
    InvalidInput = 5,
    ComputationFailed = 6,
    Panic = 7,
}

/// Validated constant system.
pub struct BurnsideParams(Params);

/// Freely reduced word.
pub struct BurnsideWord(Word);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(text));
}

fn status_of(e: &Error) -> BurnsideStatus {
    match e {
        Error::EvenExponent(_)
        | Error::ExponentTooSmall(_)
        | Error::TooFewGenerators(_)
        | Error::TooManyGenerators(_)
        | Error::InvalidTau(_) => BurnsideStatus::InvalidParams,
        Error::Parse { .. } | Error::LetterOutOfRange { .. } => BurnsideStatus::ParseError,
        e if e.is_verification_failure() => BurnsideStatus::ComputationFailed,
        _ => BurnsideStatus::InvalidInput,
    }
}

fn fail(e: Error) -> BurnsideStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `body`, turning panics into `Panic`.
fn guard(body: impl FnOnce() -> BurnsideStatus) -> BurnsideStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic".to_string());
            BurnsideStatus::Panic
        }
    }
}

fn null() -> BurnsideStatus {
    set_error("null pointer argument".to_string());
    BurnsideStatus::NullPointer
}

fn put_word(out: *mut *mut BurnsideWord, w: Word) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(BurnsideWord(w))) };
}

/// Builds parameters. `lab` selects lab mode; `tau` is ignored unless `lab` is nonzero.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn burnside_params_new(n: i64, m: u32, lab: bool, tau: i64, out: *mut *mut BurnsideParams) -> BurnsideStatus {
    guard(|| {
        if out.is_null() {
            return null();
        }
        let made = if lab {
            Params::lab(n, m, tau)
        } else {
            Params::new(n, m, Mode::Strict)
        };
        match made {
            Ok(p) => {
                *out = Box::into_raw(Box::new(BurnsideParams(p)));
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `params` must come from `burnside_params_new` and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn burnside_params_free(params: *mut BurnsideParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Parses and freely reduces a word such as `"a^3 (ab)^-2 B"` over the alphabet of `params`.
///
/// # Safety
/// Pointers must be valid; `text` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn burnside_word_parse(
    params: *const BurnsideParams,
    text: *const c_char,
    out: *mut *mut BurnsideWord,
) -> BurnsideStatus {
    guard(|| {
        if params.is_null() || text.is_null() || out.is_null() {
            return null();
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            set_error("word text is not UTF-8".to_string());
            return BurnsideStatus::InvalidUtf8;
        };
        match Word::parse_for(s, (*params).0.m) {
            Ok(w) => {
                put_word(out, w);
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `word` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn burnside_word_free(word: *mut BurnsideWord) {
    if !word.is_null() {
        drop(Box::from_raw(word));
    }
}

/// Number of letters.
///
/// # Safety
/// `word` must be a valid handle or null (which gives 0).
#[no_mangle]
pub unsafe extern "C" fn burnside_word_len(word: *const BurnsideWord) -> usize {
    if word.is_null() {
        0
    } else {
        (*word).0.len()
    }
}

/// Letter equality of two reduced words.
///
/// # Safety
/// Both handles must be valid or null (null compares unequal).
#[no_mangle]
pub unsafe extern "C" fn burnside_word_equal(a: *const BurnsideWord, b: *const BurnsideWord) -> bool {
    !a.is_null() && !b.is_null() && (*a).0 == (*b).0
}

/// Renders a word; `compress` writes repeated blocks as powers. Free the result with `burnside_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn burnside_word_to_string(word: *const BurnsideWord, compress: bool, out: *mut *mut c_char) -> BurnsideStatus {
    guard(|| {
        if word.is_null() || out.is_null() {
            return null();
        }
        let text = CString::new((*word).0.render(compress)).expect("rendered words contain no NUL");
        *out = text.into_raw();
        BurnsideStatus::Ok
    })
}

/// # Safety
/// `s` must come from `burnside_word_to_string`. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn burnside_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message of the last failure on this thread, or null. Valid until the next failing call.
#[no_mangle]
pub extern "C" fn burnside_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Stabilized canonical form; `out_rank` (optional) receives the rank where it settled.
///
/// # Safety
/// Pointers must be valid; `out_rank` may be null.
#[no_mangle]
pub unsafe extern "C" fn burnside_can(
    params: *const BurnsideParams,
    word: *const BurnsideWord,
    out: *mut *mut BurnsideWord,
    out_rank: *mut u32,
) -> BurnsideStatus {
    guard(|| {
        if params.is_null() || word.is_null() || out.is_null() {
            return null();
        }
        match can(&(*params).0, &(*word).0) {
            Ok(f) => {
                if !out_rank.is_null() {
                    *out_rank = f.rank;
                }
                put_word(out, f.word);
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Canonical form of a fixed rank.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn burnside_can_r(
    params: *const BurnsideParams,
    word: *const BurnsideWord,
    rank: u32,
    out: *mut *mut BurnsideWord,
) -> BurnsideStatus {
    guard(|| {
        if params.is_null() || word.is_null() || out.is_null() {
            return null();
        }
        match can_r(&(*params).0, &(*word).0, rank) {
            Ok(w) => {
                put_word(out, w);
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Canonical form of rank `rank` of the product `a·b`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn burnside_mult(
    params: *const BurnsideParams,
    a: *const BurnsideWord,
    b: *const BurnsideWord,
    rank: u32,
    out: *mut *mut BurnsideWord,
) -> BurnsideStatus {
    guard(|| {
        if params.is_null() || a.is_null() || b.is_null() || out.is_null() {
            return null();
        }
        match mult_r(&(*params).0, &(*a).0, &(*b).0, rank) {
            Ok(p) => {
                put_word(out, p.word);
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Rank of a primitive cyclically reduced period.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn burnside_classify_rank(
    params: *const BurnsideParams,
    period: *const BurnsideWord,
    out_rank: *mut u32,
) -> BurnsideStatus {
    guard(|| {
        if params.is_null() || period.is_null() || out_rank.is_null() {
            return null();
        }
        match classify_rank(&(*period).0, (*params).0.tau) {
            Ok(r) => {
                *out_rank = r;
                BurnsideStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
