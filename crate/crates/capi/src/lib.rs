//! C ABI for the `lrseq` library.
//!
//! The surface is handle-based: callers parse a rational generating function
//! or a weight sequence into an opaque pointer, run queries against it, and
//! receive results as NUL-terminated JSON strings. Every fallible entry
//! point returns an [`LrsStatus`]; on failure a human-readable message is
//! stored per thread and can be fetched with [`lrs_last_error`]. Every
//! string the library hands out (results and error copies alike) must be
//! released with [`lrs_string_free`]; handles have their own `_free`
//! functions. All of them tolerate null.
//!
//! The matching header is generated into `include/lrseq.h` at build time.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use lrseq::error::Error;
use lrseq::jsonio;
use lrseq::lambert::{self, GammaSpec};
use lrseq::recurrence::RationalFunction;
use lrseq::refute::RefuteOptions;

/// Result code returned by every fallible function in this library.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LrsStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Expression or JSON input could not be parsed.
    SyntaxError = 3,
    /// Input parsed but violates a documented precondition.
    InvalidInput = 4,
    /// No refutation exists: the candidate is consistent with the data.
    /// This is an answer, not an error.
    NotRefuted = 5,
    /// The certificate failed verification; the message names the first
    /// check that failed.
    CertificateRejected = 6,
    /// A search or precision cap ran out before an answer was reached.
    CapExceeded = 7,
    /// A panic was caught at the boundary. Memory is intact but the
    /// operation produced nothing.
    InternalPanic = 8,
}

/// Opaque handle to a rational generating function.
pub struct LrsRational(RationalFunction);

/// Opaque handle to a weight sequence (the gamma of a Lambert series).
pub struct LrsGamma(GammaSpec);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> LrsStatus {
    match e {
        Error::Syntax { .. } => LrsStatus::SyntaxError,
        Error::NotRefuted(_) => LrsStatus::NotRefuted,
        Error::CertificateRejected(_) => LrsStatus::CertificateRejected,
        Error::SearchCapExceeded { .. } | Error::PrecisionExhausted { .. } => {
            LrsStatus::CapExceeded
        }
        _ => LrsStatus::InvalidInput,
    }
}

fn fail(e: &Error) -> LrsStatus {
    set_error(&e.to_string());
    status_of(e)
}

/// Run `f` with a panic guard; unwinding across the C boundary would abort
/// the process, so panics are converted into a status code instead.
fn guarded<F: FnOnce() -> LrsStatus>(f: F) -> LrsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic caught at the C boundary");
            LrsStatus::InternalPanic
        }
    }
}

/// Borrow a C string argument, reporting null and encoding problems.
unsafe fn read_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, LrsStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is null"));
        return Err(LrsStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        LrsStatus::InvalidUtf8
    })
}

unsafe fn deref<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, LrsStatus> {
    if ptr.is_null() {
        set_error(&format!("{what} is null"));
        return Err(LrsStatus::NullArgument);
    }
    Ok(&*ptr)
}

fn require_slot<T>(out: *mut T) -> Result<(), LrsStatus> {
    if out.is_null() {
        set_error("output pointer is null");
        return Err(LrsStatus::NullArgument);
    }
    Ok(())
}

/// Hand a Rust string to C. Our output is JSON or plain ASCII, so interior
/// NUL bytes cannot occur; the fallback guards against future mistakes.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> LrsStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            LrsStatus::Ok
        }
        Err(_) => {
            set_error("result contained an interior NUL byte");
            LrsStatus::InternalPanic
        }
    }
}

fn default_bits(max_bits: u32) -> u32 {
    if max_bits == 0 {
        4096
    } else {
        max_bits
    }
}

/// Library version as a static NUL-terminated string. Do not free.
#[no_mangle]
pub extern "C" fn lrs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copy of the message from the most recent failure on this thread, or null
/// if the last fallible call on this thread succeeded. Free the copy with
/// [`lrs_string_free`].
#[no_mangle]
pub extern "C" fn lrs_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library. `s` may be null.
///
/// # Safety
/// `s` must have been returned by an `lrs_` function and not freed already.
#[no_mangle]
pub unsafe extern "C" fn lrs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse an expression like `"z^4/(1-z^2)+z^9/(1-z^3)"` into a rational
/// function handle. On success `*out` owns the handle; release it with
/// [`lrs_rational_free`].
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_parse(
    text: *const c_char,
    out: *mut *mut LrsRational,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let src = match read_str(text, "expression text") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match lrseq::expr::parse_rational_function(src) {
            Ok(rf) => {
                *out = Box::into_raw(Box::new(LrsRational(rf)));
                LrsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Build a rational function handle from its JSON form
/// `{"num": [...], "den": [...]}` (coefficient lists, lowest degree first).
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_from_json(
    json: *const c_char,
    out: *mut *mut LrsRational,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let src = match read_str(json, "rational function JSON") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(src) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("rational function JSON: {e}"));
                return LrsStatus::SyntaxError;
            }
        };
        match jsonio::rational_function_from_json(&value) {
            Ok(rf) => {
                *out = Box::into_raw(Box::new(LrsRational(rf)));
                LrsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Serialize a rational function handle to canonical compact JSON.
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_to_json(
    h: *const LrsRational,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let rf = match deref(h, "rational function handle") {
            Ok(r) => &r.0,
            Err(s) => return s,
        };
        write_string(
            out,
            jsonio::canonical_compact(&jsonio::rational_function_to_json(rf)),
        )
    })
}

/// Release a rational function handle. `h` may be null.
///
/// # Safety
/// `h` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_free(h: *mut LrsRational) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// First `count` Taylor coefficients of the rational function, as a JSON
/// array of exact rationals (strings like `"3/2"` or plain integers).
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_expand(
    h: *const LrsRational,
    count: usize,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let rf = match deref(h, "rational function handle") {
            Ok(r) => &r.0,
            Err(s) => return s,
        };
        let terms = rf.expand(count);
        write_string(out, jsonio::canonical_compact(&jsonio::rats_to_json(&terms)))
    })
}

/// Describe the zero set of the coefficient sequence: full residue classes
/// mod the ratio-order modulus plus sporadic zeros up to `bound`, with
/// completeness flags. `max_bits` caps the root-isolation precision; pass 0
/// for the default (4096).
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_zero_set(
    h: *const LrsRational,
    bound: u64,
    max_bits: u32,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let rf = match deref(h, "rational function handle") {
            Ok(r) => &r.0,
            Err(s) => return s,
        };
        match lrseq::zeros::zero_set(rf, bound, default_bits(max_bits)) {
            Ok(desc) => write_string(
                out,
                jsonio::canonical_compact(&jsonio::zero_set_to_json(&desc)),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Split the rational function into a polynomial part plus proper-power
/// folds `H_d(z^d)`, or report why no such splitting exists. Primes up to
/// `prime_bound` are tried as witnesses; pass 0 for the default (1000).
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_decompose(
    h: *const LrsRational,
    prime_bound: u64,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let rf = match deref(h, "rational function handle") {
            Ok(r) => &r.0,
            Err(s) => return s,
        };
        let bound = if prime_bound == 0 { 1000 } else { prime_bound };
        match lrseq::decompose::proper_power_decompose(rf, bound) {
            Ok(dec) => write_string(
                out,
                jsonio::canonical_compact(&jsonio::decomposition_to_json(&dec)),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Report which residue classes carry a dominant pole relation. `max_bits`
/// caps the root-isolation precision; pass 0 for the default (4096).
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_rational_dominant(
    h: *const LrsRational,
    max_bits: u32,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let rf = match deref(h, "rational function handle") {
            Ok(r) => &r.0,
            Err(s) => return s,
        };
        match lrseq::dominant::dominant_analysis(rf, default_bits(max_bits)) {
            Ok(dom) => write_string(
                out,
                jsonio::canonical_compact(&jsonio::dominant_to_json(&dom)),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Build a weight sequence handle from JSON: either
/// `{"recurrence": {...}}` or `{"support": {"4": "1", ...}}`. Release with
/// [`lrs_gamma_free`].
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_gamma_from_json(
    json: *const c_char,
    out: *mut *mut LrsGamma,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let src = match read_str(json, "weight sequence JSON") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(src) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("weight sequence JSON: {e}"));
                return LrsStatus::SyntaxError;
            }
        };
        match jsonio::gamma_from_json(&value) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(LrsGamma(g)));
                LrsStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Serialize a weight sequence handle back to canonical compact JSON.
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_gamma_to_json(
    h: *const LrsGamma,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let g = match deref(h, "weight sequence handle") {
            Ok(g) => &g.0,
            Err(s) => return s,
        };
        write_string(out, jsonio::canonical_compact(&jsonio::gamma_to_json(g)))
    })
}

/// Release a weight sequence handle. `h` may be null.
///
/// # Safety
/// `h` must have come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn lrs_gamma_free(h: *mut LrsGamma) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Weight values `gamma_1 .. gamma_count` as a JSON array.
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_gamma_terms(
    h: *const LrsGamma,
    count: usize,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let g = match deref(h, "weight sequence handle") {
            Ok(g) => &g.0,
            Err(s) => return s,
        };
        let terms = g.prefix(count);
        write_string(out, jsonio::canonical_compact(&jsonio::rats_to_json(&terms)))
    })
}

/// Divisor sums `b_m = sum over d | m of gamma_d` for `m = 1 .. count`,
/// i.e. the Taylor coefficients of the Lambert series of the weights, as a
/// JSON array.
///
/// # Safety
/// `h` must be a live handle from this library; `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_gamma_divisor_sums(
    h: *const LrsGamma,
    count: usize,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let g = match deref(h, "weight sequence handle") {
            Ok(g) => &g.0,
            Err(s) => return s,
        };
        let sums = lambert::lambert_coefficients(g, count);
        write_string(out, jsonio::canonical_compact(&jsonio::rats_to_json(&sums)))
    })
}

/// Try to refute the claim that `candidate_json` (a recurrence object
/// `{"coeffs": [...], "initial": [...], "start_index": n, "first_index": 1}`,
/// indexed from 1) generates the divisor sums of the weights. On success
/// writes a certificate as JSON.
/// Returns `NotRefuted` when the claim survives — the weights have no
/// recurrent part, so no contradiction exists. `witness_cap` bounds the
/// witness search; pass 0 for the default (256).
///
/// # Safety
/// `gamma` must be a live handle from this library, `candidate_json` a
/// NUL-terminated string, and `out` a valid writable slot.
#[no_mangle]
pub unsafe extern "C" fn lrs_refute(
    gamma: *const LrsGamma,
    candidate_json: *const c_char,
    witness_cap: u64,
    out: *mut *mut c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        if let Err(s) = require_slot(out) {
            return s;
        }
        let g = match deref(gamma, "weight sequence handle") {
            Ok(g) => &g.0,
            Err(s) => return s,
        };
        let candidate = match parse_candidate(candidate_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let mut opts = RefuteOptions::default();
        if witness_cap != 0 {
            opts.witness_cap = witness_cap;
        }
        match lrseq::refute::refute(g, &candidate, &opts) {
            Ok(cert) => write_string(
                out,
                jsonio::canonical_compact(&jsonio::certificate_to_json(&cert)),
            ),
            Err(e) => fail(&e),
        }
    })
}

/// Check a refutation certificate against the weights and candidate it
/// claims to refute. Returns `Ok` when every field replays;
/// `CertificateRejected` (with the failed check named in the error message)
/// when any does not.
///
/// # Safety
/// `cert_json` and `candidate_json` must be NUL-terminated strings and
/// `gamma` a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn lrs_verify(
    cert_json: *const c_char,
    gamma: *const LrsGamma,
    candidate_json: *const c_char,
) -> LrsStatus {
    guarded(|| {
        clear_error();
        let g = match deref(gamma, "weight sequence handle") {
            Ok(g) => &g.0,
            Err(s) => return s,
        };
        let src = match read_str(cert_json, "certificate JSON") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let value: serde_json::Value = match serde_json::from_str(src) {
            Ok(v) => v,
            Err(e) => {
                set_error(&format!("certificate JSON: {e}"));
                return LrsStatus::SyntaxError;
            }
        };
        let cert = match jsonio::certificate_from_json(&value) {
            Ok(c) => c,
            Err(e) => return fail(&e),
        };
        let candidate = match parse_candidate(candidate_json) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match lrseq::refute::verify_certificate(&cert, g, &candidate) {
            Ok(()) => LrsStatus::Ok,
            Err(e) => fail(&e),
        }
    })
}

unsafe fn parse_candidate(
    candidate_json: *const c_char,
) -> Result<lrseq::recurrence::LinearRecurrence, LrsStatus> {
    let src = read_str(candidate_json, "candidate recurrence JSON")?;
    let value: serde_json::Value = serde_json::from_str(src).map_err(|e| {
        set_error(&format!("candidate recurrence JSON: {e}"));
        LrsStatus::SyntaxError
    })?;
    jsonio::recurrence_from_json(&value).map_err(|e| fail(&e))
}
