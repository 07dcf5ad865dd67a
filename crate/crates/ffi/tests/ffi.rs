//! Exercises the C ABI the way a C caller would: through raw pointers,
//! status codes, and the per-thread error message.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use streamlab_ffi::*;

unsafe fn grab_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    sl_string_free(p);
    s
}

unsafe fn last_error() -> String {
    CStr::from_ptr(sl_last_error()).to_str().unwrap().to_owned()
}

unsafe fn stream(expr: &str) -> *mut SlStream {
    let c = CString::new(expr).unwrap();
    let mut s: *mut SlStream = ptr::null_mut();
    assert_eq!(sl_stream_from_expr(c.as_ptr(), &mut s), SlStatus::SlStatusOk);
    s
}

#[test]
fn streams_round_trip_through_the_handle_api() {
    unsafe {
        let s = stream("tm");
        let mut prefix: *mut c_char = ptr::null_mut();
        assert_eq!(sl_stream_prefix(s, 16, &mut prefix), SlStatus::SlStatusOk);
        assert_eq!(grab_string(prefix), "0110100110010110");

        let mut letter: u32 = 0;
        assert_eq!(sl_stream_letter_at(s, 5, &mut letter), SlStatus::SlStatusOk);
        assert_eq!(char::from_u32(letter), Some('0'));
        sl_stream_free(s);
    }
}

#[test]
fn null_and_bad_arguments_come_back_as_statuses() {
    unsafe {
        let mut s: *mut SlStream = ptr::null_mut();
        assert_eq!(
            sl_stream_from_expr(ptr::null(), &mut s),
            SlStatus::SlStatusNullArgument
        );
        assert!(!last_error().is_empty());

        let bad = CString::new("zip(tm").unwrap();
        assert_eq!(
            sl_stream_from_expr(bad.as_ptr(), &mut s),
            SlStatus::SlStatusParse
        );
        assert!(last_error().contains("offset"));

        let mut prefix: *mut c_char = ptr::null_mut();
        assert_eq!(
            sl_stream_prefix(ptr::null(), 4, &mut prefix),
            SlStatus::SlStatusNullArgument
        );

        // Frees shrug off NULL.
        sl_stream_free(ptr::null_mut());
        sl_rule_free(ptr::null_mut());
        sl_verdict_free(ptr::null_mut());
        sl_string_free(ptr::null_mut());
    }
}

#[test]
fn elementary_rules_apply_to_streams() {
    unsafe {
        let mut rule: *mut SlRule = ptr::null_mut();
        assert_eq!(sl_rule_eca(102, &mut rule), SlStatus::SlStatusOk);

        let s = stream("tm");
        let mut image: *mut SlStream = ptr::null_mut();
        assert_eq!(sl_rule_apply(rule, s, &mut image), SlStatus::SlStatusOk);

        let mut prefix: *mut c_char = ptr::null_mut();
        assert_eq!(sl_stream_prefix(image, 15, &mut prefix), SlStatus::SlStatusOk);
        assert_eq!(grab_string(prefix), "101110101011101");

        sl_stream_free(image);
        sl_stream_free(s);
        sl_rule_free(rule);
    }
}

#[test]
fn rule_files_parse_and_run() {
    unsafe {
        let text = CString::new(
            "%ca\nalphabet: 01\nradius: 1\n_00 -> 0\n_01 -> 1\n_10 -> 1\n_11 -> 0\ndefault -> 0\n",
        )
        .unwrap();
        let mut rule: *mut SlRule = ptr::null_mut();
        assert_eq!(sl_rule_parse(text.as_ptr(), &mut rule), SlStatus::SlStatusOk);

        let s = stream("tm");
        let mut image: *mut SlStream = ptr::null_mut();
        assert_eq!(sl_rule_apply(rule, s, &mut image), SlStatus::SlStatusOk);
        let mut prefix: *mut c_char = ptr::null_mut();
        assert_eq!(sl_stream_prefix(image, 15, &mut prefix), SlStatus::SlStatusOk);
        assert_eq!(grab_string(prefix), "101110101011101");

        sl_stream_free(image);
        sl_stream_free(s);
        sl_rule_free(rule);

        let garbage = CString::new("%ca\nradius: zero\n").unwrap();
        assert_eq!(
            sl_rule_parse(garbage.as_ptr(), &mut rule),
            SlStatus::SlStatusParse
        );
    }
}

#[test]
fn synthesis_exposes_the_verdict_fields() {
    unsafe {
        let six = stream("tau:6");
        let two = stream("periodic:10");

        let mut v: *mut SlVerdict = ptr::null_mut();
        assert_eq!(sl_synthesize(six, two, 8, 600, &mut v), SlStatus::SlStatusOk);
        assert!(sl_verdict_answer(v));
        assert_eq!(sl_verdict_radius(v), 2);
        assert_eq!(sl_verdict_witness_count(v), 2);

        let mut report: *mut c_char = ptr::null_mut();
        assert_eq!(sl_verdict_report(v, &mut report), SlStatus::SlStatusOk);
        let report = grab_string(report);
        assert!(report.starts_with("answer: yes"));
        assert!(report.contains("%ca"));
        sl_verdict_free(v);

        // The reverse direction is refuted at every radius tried.
        let mut v: *mut SlVerdict = ptr::null_mut();
        assert_eq!(sl_synthesize(two, six, 3, 600, &mut v), SlStatus::SlStatusOk);
        assert!(!sl_verdict_answer(v));
        assert_eq!(sl_verdict_witness_count(v), 4);
        sl_verdict_free(v);

        sl_stream_free(two);
        sl_stream_free(six);
    }
}

#[test]
fn budget_checks_report_their_guess() {
    unsafe {
        let six = stream("tau:6");
        let two = stream("periodic:10");

        let mut answer = false;
        assert_eq!(sl_check(six, two, 1, 1, 36, &mut answer), SlStatus::SlStatusOk);
        assert!(answer);
        assert_eq!(sl_check(six, two, 1, 1, 20, &mut answer), SlStatus::SlStatusOk);
        assert!(!answer);

        sl_stream_free(two);
        sl_stream_free(six);
    }
}

#[test]
fn finite_fixtures_surface_the_limit_status() {
    unsafe {
        let s = stream("sierpinski");
        let mut prefix: *mut c_char = ptr::null_mut();
        assert_eq!(sl_stream_prefix(s, 64, &mut prefix), SlStatus::SlStatusLimit);
        assert!(last_error().contains("17"));
        sl_stream_free(s);
    }
}
