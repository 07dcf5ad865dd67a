//! C ABI for the stream library: opaque handles, integer statuses, and
//! a per-thread error message.
//!
//! Conventions:
//! - Constructors write a heap handle through an out-pointer and return
//!   a status; every handle has a matching `sl_*_free`.
//! - Any non-`SL_STATUS_OK` return leaves a message readable via
//!   [`sl_last_error`], valid on the calling thread until its next
//!   failing call.
//! - Strings are NUL-terminated UTF-8; strings returned by the library
//!   are released with [`sl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use streamlab::ca::{self, LocalRule};
use streamlab::expr::build_stream;
use streamlab::reducer::{self, Verdict};
use streamlab::stream::Stream;
use streamlab::Error;

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SlStatus {
    /// The call succeeded.
    SlStatusOk = 0,
    /// A required pointer argument was NULL.
    SlStatusNullArgument = 1,
    /// A string argument was not valid UTF-8.
    SlStatusInvalidUtf8 = 2,
    /// An expression or rule file failed to parse.
    SlStatusParse = 3,
    /// Evaluation failed (alphabet mismatch, bad parameters, ...).
    SlStatusEval = 4,
    /// A resource limit was hit: stall, index ceiling, or a fixture end.
    SlStatusLimit = 5,
}

/// An infinite stream handle.
pub struct SlStream {
    inner: Stream,
}

/// A sliding-window rule handle.
pub struct SlRule {
    inner: LocalRule,
}

/// The outcome of a synthesis run.
pub struct SlVerdict {
    inner: Verdict,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(e: &Error) -> SlStatus {
    let message = CString::new(e.to_string())
        .unwrap_or_else(|_| CString::new("error message contained NUL").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = message);
    match e {
        Error::ExprSyntax { .. } | Error::FileFormat { .. } => SlStatus::SlStatusParse,
        Error::Stall { .. }
        | Error::CeilingExceeded { .. }
        | Error::FixtureExhausted { .. }
        | Error::EmptyBlocks { .. } => SlStatus::SlStatusLimit,
        _ => SlStatus::SlStatusEval,
    }
}

fn fail_null() -> SlStatus {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new("a required pointer argument was NULL").unwrap()
    });
    SlStatus::SlStatusNullArgument
}

/// The message of the last failing call on this thread, as a
/// NUL-terminated UTF-8 string, or an empty string if nothing failed
/// yet.
///
/// # Safety
/// The pointer stays valid on this thread until the next failing call;
/// do not free it and do not share it across threads.
#[no_mangle]
pub unsafe extern "C" fn sl_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

unsafe fn utf8_arg<'a>(p: *const c_char) -> Result<&'a str, SlStatus> {
    if p.is_null() {
        return Err(fail_null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        LAST_ERROR.with(|slot| {
            *slot.borrow_mut() = CString::new("a string argument was not valid UTF-8").unwrap()
        });
        SlStatus::SlStatusInvalidUtf8
    })
}

unsafe fn hand_out<T>(out: *mut *mut T, value: T) -> SlStatus {
    if out.is_null() {
        return fail_null();
    }
    *out = Box::into_raw(Box::new(value));
    SlStatus::SlStatusOk
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, SlStatus> {
    p.as_ref().ok_or_else(|| fail_null())
}

/// Builds a stream from an expression such as `"tm"`, `"periodic:011"`,
/// or `"zip(tm, pd)"`, writing the handle to `out`.
///
/// # Safety
/// `expr` must point to a NUL-terminated string and `out` to a valid
/// pointer slot. The handle must be released with [`sl_stream_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_stream_from_expr(
    expr: *const c_char,
    out: *mut *mut SlStream,
) -> SlStatus {
    let text = match utf8_arg(expr) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match build_stream(text) {
        Ok(inner) => hand_out(out, SlStream { inner }),
        Err(e) => fail(&e),
    }
}

/// Writes the first `len` letters of a stream as a fresh NUL-terminated
/// string to `out`.
///
/// # Safety
/// `s` must be a live stream handle and `out` a valid pointer slot. The
/// string must be released with [`sl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_stream_prefix(
    s: *const SlStream,
    len: u64,
    out: *mut *mut c_char,
) -> SlStatus {
    let s = match borrow(s) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match s.inner.prefix(len) {
        Ok(prefix) => {
            if out.is_null() {
                return fail_null();
            }
            let c = CString::new(prefix).expect("letters are never NUL");
            *out = c.into_raw();
            SlStatus::SlStatusOk
        }
        Err(e) => fail(&e),
    }
}

/// Writes the Unicode scalar value of letter `i` to `out`.
///
/// # Safety
/// `s` must be a live stream handle and `out` a valid `uint32_t` slot.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_letter_at(
    s: *const SlStream,
    i: u64,
    out: *mut u32,
) -> SlStatus {
    let s = match borrow(s) {
        Ok(s) => s,
        Err(status) => return status,
    };
    match s.inner.letter_at(i) {
        Ok(letter) => {
            if out.is_null() {
                return fail_null();
            }
            *out = letter as u32;
            SlStatus::SlStatusOk
        }
        Err(e) => fail(&e),
    }
}

/// Releases a stream handle. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_stream_free(s: *mut SlStream) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parses a rule file (the `%ca` format) into a rule handle.
///
/// # Safety
/// `text` must point to a NUL-terminated string and `out` to a valid
/// pointer slot. The handle must be released with [`sl_rule_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_rule_parse(text: *const c_char, out: *mut *mut SlRule) -> SlStatus {
    let text = match utf8_arg(text) {
        Ok(t) => t,
        Err(status) => return status,
    };
    match ca::parse_rule(text) {
        Ok(inner) => hand_out(out, SlRule { inner }),
        Err(e) => fail(&e),
    }
}

/// Builds the elementary rule with the given Wolfram number.
///
/// # Safety
/// `out` must be a valid pointer slot; release with [`sl_rule_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_rule_eca(number: u8, out: *mut *mut SlRule) -> SlStatus {
    hand_out(out, SlRule { inner: ca::eca_rule(number) })
}

/// Applies a rule to a stream, producing a new stream handle.
///
/// # Safety
/// `rule` and `s` must be live handles and `out` a valid pointer slot.
#[no_mangle]
pub unsafe extern "C" fn sl_rule_apply(
    rule: *const SlRule,
    s: *const SlStream,
    out: *mut *mut SlStream,
) -> SlStatus {
    let (rule, s) = match (borrow(rule), borrow(s)) {
        (Ok(r), Ok(s)) => (r, s),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match ca::apply(&rule.inner, &s.inner) {
        Ok(inner) => hand_out(out, SlStream { inner }),
        Err(e) => fail(&e),
    }
}

/// Releases a rule handle. NULL is ignored.
///
/// # Safety
/// `r` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_rule_free(r: *mut SlRule) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Searches radii `0..=max_radius` for a rule mapping `src` to `dst` on
/// the first `horizon` positions, writing a verdict handle to `out`.
///
/// # Safety
/// `src` and `dst` must be live stream handles and `out` a valid pointer
/// slot. The handle must be released with [`sl_verdict_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_synthesize(
    src: *const SlStream,
    dst: *const SlStream,
    max_radius: u64,
    horizon: u64,
    out: *mut *mut SlVerdict,
) -> SlStatus {
    let (src, dst) = match (borrow(src), borrow(dst)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match reducer::synthesize(&src.inner, &dst.inner, max_radius, horizon) {
        Ok(inner) => hand_out(out, SlVerdict { inner }),
        Err(e) => fail(&e),
    }
}

/// Whether the verdict found a rule. False for NULL.
///
/// # Safety
/// `v` must be NULL or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn sl_verdict_answer(v: *const SlVerdict) -> bool {
    v.as_ref().is_some_and(|v| v.inner.answer)
}

/// The last radius examined. Zero for NULL.
///
/// # Safety
/// `v` must be NULL or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn sl_verdict_radius(v: *const SlVerdict) -> u64 {
    v.as_ref().map_or(0, |v| v.inner.radius_reached)
}

/// Number of per-radius conflict witnesses recorded. Zero for NULL.
///
/// # Safety
/// `v` must be NULL or a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn sl_verdict_witness_count(v: *const SlVerdict) -> u64 {
    v.as_ref().map_or(0, |v| v.inner.witnesses.len() as u64)
}

/// Renders the verdict as the plain-text report, written as a fresh
/// NUL-terminated string to `out`.
///
/// # Safety
/// `v` must be a live verdict handle and `out` a valid pointer slot. The
/// string must be released with [`sl_string_free`].
#[no_mangle]
pub unsafe extern "C" fn sl_verdict_report(
    v: *const SlVerdict,
    out: *mut *mut c_char,
) -> SlStatus {
    let v = match borrow(v) {
        Ok(v) => v,
        Err(status) => return status,
    };
    if out.is_null() {
        return fail_null();
    }
    let text = CString::new(reducer::report(&v.inner)).expect("reports are never NUL");
    *out = text.into_raw();
    SlStatus::SlStatusOk
}

/// Releases a verdict handle. NULL is ignored.
///
/// # Safety
/// `v` must be NULL or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_verdict_free(v: *mut SlVerdict) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Runs the budgeted reducibility check with slack `alpha_p / alpha_q`
/// and at most `c_max` processed windows, writing the guess to `answer`.
///
/// # Safety
/// `src` and `dst` must be live stream handles and `answer` a valid
/// `bool` slot.
#[no_mangle]
pub unsafe extern "C" fn sl_check(
    src: *const SlStream,
    dst: *const SlStream,
    alpha_p: u64,
    alpha_q: u64,
    c_max: u64,
    answer: *mut bool,
) -> SlStatus {
    let (src, dst) = match (borrow(src), borrow(dst)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(status), _) | (_, Err(status)) => return status,
    };
    match reducer::budget_check(&src.inner, &dst.inner, (alpha_p, alpha_q), c_max) {
        Ok(outcome) => {
            if answer.is_null() {
                return fail_null();
            }
            *answer = outcome.answer;
            SlStatus::SlStatusOk
        }
        Err(e) => fail(&e),
    }
}

/// Releases a string produced by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
