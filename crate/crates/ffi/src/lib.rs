//! C ABI over `ppm-core`.
//!
//! Permutations cross the boundary as opaque `PpmPermutation` handles. Every
//! fallible call returns a `PpmStatus`; on failure `ppm_last_error` describes
//! what went wrong on the calling thread. Strings handed out by this library
//! must be released with `ppm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ppm_core::tdsolver::StripCount;
use ppm_core::{Algorithm, Permutation, Solver};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidPermutation = 2,
    InvalidArgument = 3,
    Overflow = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PpmAlgorithm {
    Auto = 0,
    Brute = 1,
    TreeDp = 2,
    Strips = 3,
    EvenOdd = 4,
}

/// Opaque permutation handle.
pub struct PpmPermutation(Permutation);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn fail(status: PpmStatus, msg: impl Into<String>) -> PpmStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> PpmStatus) -> PpmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(PpmStatus::Panic, "internal panic"),
    }
}

fn algorithm(a: PpmAlgorithm, strips: usize) -> Algorithm {
    match a {
        PpmAlgorithm::Auto => Algorithm::Auto,
        PpmAlgorithm::Brute => Algorithm::Brute,
        PpmAlgorithm::TreeDp => Algorithm::TreeDp,
        PpmAlgorithm::Strips if strips == 0 => Algorithm::Strips(StripCount::Auto),
        PpmAlgorithm::Strips => Algorithm::Strips(StripCount::Fixed(strips)),
        PpmAlgorithm::EvenOdd => Algorithm::EvenOdd,
    }
}

/// Message for the last failed call on this thread; empty if none. Valid
/// until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn ppm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a permutation from `len` 1-based values.
///
/// # Safety
/// `values` must point to `len` readable `size_t`s and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_permutation_new(
    values: *const usize,
    len: usize,
    out: *mut *mut PpmPermutation,
) -> PpmStatus {
    guarded(|| {
        if values.is_null() || out.is_null() {
            return fail(PpmStatus::NullPointer, "null argument");
        }
        let vals = std::slice::from_raw_parts(values, len).to_vec();
        match Permutation::new(vals) {
            Ok(p) => {
                *out = Box::into_raw(Box::new(PpmPermutation(p)));
                PpmStatus::Ok
            }
            Err(e) => fail(PpmStatus::InvalidPermutation, e.to_string()),
        }
    })
}

/// Parses one-line notation such as `"2 3 1"`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_permutation_parse(text: *const c_char, out: *mut *mut PpmPermutation) -> PpmStatus {
    guarded(|| {
        if text.is_null() || out.is_null() {
            return fail(PpmStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(PpmStatus::InvalidPermutation, "not UTF-8");
        };
        match s.parse::<Permutation>() {
            Ok(p) => {
                *out = Box::into_raw(Box::new(PpmPermutation(p)));
                PpmStatus::Ok
            }
            Err(e) => fail(PpmStatus::InvalidPermutation, e.to_string()),
        }
    })
}

/// Length of the permutation, 0 for a null handle.
///
/// # Safety
/// `perm` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ppm_permutation_len(perm: *const PpmPermutation) -> usize {
    perm.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the values into `buf`, which must have room for `ppm_permutation_len` entries.
///
/// # Safety
/// `perm` must be a live handle and `buf` must point to `cap` writable `size_t`s.
#[no_mangle]
pub unsafe extern "C" fn ppm_permutation_values(perm: *const PpmPermutation, buf: *mut usize, cap: usize) -> PpmStatus {
    guarded(|| {
        let Some(p) = perm.as_ref() else {
            return fail(PpmStatus::NullPointer, "null permutation");
        };
        if buf.is_null() {
            return fail(PpmStatus::NullPointer, "null buffer");
        }
        if cap < p.0.len() {
            return fail(PpmStatus::InvalidArgument, format!("buffer holds {cap}, need {}", p.0.len()));
        }
        ptr::copy_nonoverlapping(p.0.values().as_ptr(), buf, p.0.len());
        PpmStatus::Ok
    })
}

/// # Safety
/// `perm` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ppm_permutation_free(perm: *mut PpmPermutation) {
    if !perm.is_null() {
        drop(Box::from_raw(perm));
    }
}

/// Decides whether `pattern` occurs in `text`. `strips` is the strip count for
/// `Strips` (0 picks it automatically) and is ignored otherwise.
///
/// # Safety
/// `text` and `pattern` must be live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_contains(
    text: *const PpmPermutation,
    pattern: *const PpmPermutation,
    algo: PpmAlgorithm,
    strips: usize,
    out: *mut bool,
) -> PpmStatus {
    guarded(|| {
        let (Some(t), Some(p)) = (text.as_ref(), pattern.as_ref()) else {
            return fail(PpmStatus::NullPointer, "null permutation");
        };
        if out.is_null() {
            return fail(PpmStatus::NullPointer, "null output");
        }
        *out = algorithm(algo, strips).contains(&t.0, &p.0);
        PpmStatus::Ok
    })
}

fn count_of(text: &Permutation, pattern: &Permutation, algo: PpmAlgorithm) -> Result<ppm_core::MatchCount, PpmStatus> {
    algorithm(algo, 0)
        .count(text, pattern)
        .ok_or_else(|| fail(PpmStatus::InvalidArgument, "strips only decides; pick a counting algorithm"))
}

/// Number of occurrences as a decimal string, released with `ppm_string_free`.
///
/// # Safety
/// `text` and `pattern` must be live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_count(
    text: *const PpmPermutation,
    pattern: *const PpmPermutation,
    algo: PpmAlgorithm,
    out: *mut *mut c_char,
) -> PpmStatus {
    guarded(|| {
        let (Some(t), Some(p)) = (text.as_ref(), pattern.as_ref()) else {
            return fail(PpmStatus::NullPointer, "null permutation");
        };
        if out.is_null() {
            return fail(PpmStatus::NullPointer, "null output");
        }
        match count_of(&t.0, &p.0, algo) {
            Ok(c) => {
                *out = CString::new(c.to_string()).expect("digits").into_raw();
                PpmStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Number of occurrences, or `Overflow` if it does not fit in 64 bits.
///
/// # Safety
/// `text` and `pattern` must be live handles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ppm_count_u64(
    text: *const PpmPermutation,
    pattern: *const PpmPermutation,
    algo: PpmAlgorithm,
    out: *mut u64,
) -> PpmStatus {
    guarded(|| {
        let (Some(t), Some(p)) = (text.as_ref(), pattern.as_ref()) else {
            return fail(PpmStatus::NullPointer, "null permutation");
        };
        if out.is_null() {
            return fail(PpmStatus::NullPointer, "null output");
        }
        match count_of(&t.0, &p.0, algo) {
            Ok(c) => match c.to_u64() {
                Some(v) => {
                    *out = v;
                    PpmStatus::Ok
                }
                None => fail(PpmStatus::Overflow, format!("count {c} exceeds 64 bits")),
            },
            Err(s) => s,
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ppm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
