//! Exercises the C ABI from Rust: handle lifecycles, JSON plumbing, error
//! reporting, and a full refute/verify round trip through the boundary.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use lrseq::jsonio;
use lrseq::rat::Rat;
use lrseq::recurrence::berlekamp_massey;
use lrseq_capi::*;

/// Take ownership of a string returned through the ABI.
fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null(), "expected a string from the library");
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { lrs_string_free(p) };
    s
}

fn last_error() -> Option<String> {
    let p = lrs_last_error();
    if p.is_null() {
        None
    } else {
        Some(take_string(p))
    }
}

fn parse_rational(text: &str) -> *mut LrsRational {
    let c = CString::new(text).unwrap();
    let mut h: *mut LrsRational = ptr::null_mut();
    let status = unsafe { lrs_rational_parse(c.as_ptr(), &mut h) };
    assert_eq!(status, LrsStatus::Ok, "parse failed: {:?}", last_error());
    assert!(!h.is_null());
    h
}

fn gamma_from_json(json: &str) -> *mut LrsGamma {
    let c = CString::new(json).unwrap();
    let mut h: *mut LrsGamma = ptr::null_mut();
    let status = unsafe { lrs_gamma_from_json(c.as_ptr(), &mut h) };
    assert_eq!(status, LrsStatus::Ok, "gamma failed: {:?}", last_error());
    assert!(!h.is_null());
    h
}

fn rats_from_json_str(json: &str) -> Vec<Rat> {
    let v: serde_json::Value = serde_json::from_str(json).unwrap();
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| jsonio::rat_from_json(x).unwrap())
        .collect()
}

#[test]
fn version_is_a_static_string() {
    let p = lrs_version();
    assert!(!p.is_null());
    let v = unsafe { CStr::from_ptr(p) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn expand_matches_direct_library_call() {
    let h = parse_rational("z/(1-z-z^2)");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { lrs_rational_expand(h, 10, &mut out) };
    assert_eq!(status, LrsStatus::Ok);
    let json = take_string(out);

    let rf = lrseq::expr::parse_rational_function("z/(1-z-z^2)").unwrap();
    let expected = jsonio::canonical_compact(&jsonio::rats_to_json(&rf.expand(10)));
    assert_eq!(json, expected);
    assert!(json.starts_with(r#"["0","1","1","2","3","5"#));

    unsafe { lrs_rational_free(h) };
}

#[test]
fn rational_json_round_trip() {
    let h = parse_rational("(1+z)/(1-z^3)");
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { lrs_rational_to_json(h, &mut out) }, LrsStatus::Ok);
    let json = take_string(out);

    let c = CString::new(json.clone()).unwrap();
    let mut h2: *mut LrsRational = ptr::null_mut();
    assert_eq!(
        unsafe { lrs_rational_from_json(c.as_ptr(), &mut h2) },
        LrsStatus::Ok
    );
    let mut out2: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { lrs_rational_to_json(h2, &mut out2) }, LrsStatus::Ok);
    assert_eq!(take_string(out2), json);

    unsafe { lrs_rational_free(h) };
    unsafe { lrs_rational_free(h2) };
}

#[test]
fn zero_set_reports_classes_and_sporadics() {
    let h = parse_rational("z^3/(1-z^2)");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { lrs_rational_zero_set(h, 30, 512, &mut out) };
    assert_eq!(status, LrsStatus::Ok, "{:?}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    // odd indices >= 3 are hits, so the even class vanishes mod 2
    assert_eq!(v["modulus"], 2);
    assert_eq!(v["zero_residues"], serde_json::json!([0]));
    let sporadic: Vec<u64> = v["sporadic"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(sporadic, vec![1]);
    unsafe { lrs_rational_free(h) };
}

#[test]
fn decompose_finds_proper_power_parts() {
    let h = parse_rational("z^4/(1-z^2)+z^9/(1-z^3)");
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { lrs_rational_decompose(h, 0, &mut out) };
    assert_eq!(status, LrsStatus::Ok, "{:?}", last_error());
    let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let mut ds: Vec<u64> = v["parts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["d"].as_u64().unwrap())
        .collect();
    ds.sort_unstable();
    assert_eq!(ds, vec![2, 3]);
    unsafe { lrs_rational_free(h) };
}

#[test]
fn gamma_terms_and_divisor_sums() {
    // Fibonacci weights: gamma_1 = gamma_2 = 1, gamma_n = gamma_{n-1} + gamma_{n-2}
    let g = gamma_from_json(
        r#"{"recurrence":{"coeffs":["1","1"],"initial":["1","1"],"start_index":1,"first_index":1}}"#,
    );

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(unsafe { lrs_gamma_terms(g, 6, &mut out) }, LrsStatus::Ok);
    assert_eq!(take_string(out), r#"["1","1","2","3","5","8"]"#);

    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lrs_gamma_divisor_sums(g, 6, &mut out) },
        LrsStatus::Ok
    );
    // b_m = sum of gamma_d over d | m: 1, 1+1, 1+2, 1+1+3, 1+5, 1+1+2+8
    assert_eq!(take_string(out), r#"["1","2","3","5","6","12"]"#);

    unsafe { lrs_gamma_free(g) };
}

#[test]
fn refute_then_verify_round_trip() {
    let g = gamma_from_json(
        r#"{"recurrence":{"coeffs":["1"],"initial":["1"],"start_index":1,"first_index":1}}"#,
    );

    // fit a plausible-looking candidate to a 16-term divisor-sum prefix
    let mut out: *mut c_char = ptr::null_mut();
    assert_eq!(
        unsafe { lrs_gamma_divisor_sums(g, 16, &mut out) },
        LrsStatus::Ok
    );
    let prefix = rats_from_json_str(&take_string(out));
    let candidate = berlekamp_massey(&prefix, 1).unwrap().unwrap();
    let candidate_json =
        CString::new(jsonio::canonical_compact(&jsonio::recurrence_to_json(&candidate))).unwrap();

    let mut cert_out: *mut c_char = ptr::null_mut();
    let status = unsafe { lrs_refute(g, candidate_json.as_ptr(), 0, &mut cert_out) };
    assert_eq!(status, LrsStatus::Ok, "{:?}", last_error());
    let cert_json = take_string(cert_out);

    let cert_c = CString::new(cert_json.clone()).unwrap();
    assert_eq!(
        unsafe { lrs_verify(cert_c.as_ptr(), g, candidate_json.as_ptr()) },
        LrsStatus::Ok
    );
    assert_eq!(last_error(), None);

    // tamper with the witness index: verification must name the failed check
    let mut v: serde_json::Value = serde_json::from_str(&cert_json).unwrap();
    let m: u64 = v["m"].as_str().unwrap().parse().unwrap();
    v["m"] = serde_json::json!((m + 1).to_string());
    let bad = CString::new(serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(
        unsafe { lrs_verify(bad.as_ptr(), g, candidate_json.as_ptr()) },
        LrsStatus::CertificateRejected
    );
    let msg = last_error().expect("rejection must leave a message");
    assert!(msg.contains("certificate rejected"), "{msg}");

    unsafe { lrs_gamma_free(g) };
}

#[test]
fn refute_declines_when_weights_are_finite() {
    // a single spike has no recurrent part, so its series is rational and
    // no contradiction exists
    let g = gamma_from_json(r#"{"support":{"1":"1"}}"#);
    let candidate_json = CString::new(
        r#"{"coeffs":["1"],"initial":["1"],"start_index":1,"first_index":1}"#,
    )
    .unwrap();
    let mut out: *mut c_char = ptr::null_mut();
    let status = unsafe { lrs_refute(g, candidate_json.as_ptr(), 0, &mut out) };
    assert_eq!(status, LrsStatus::NotRefuted);
    assert!(out.is_null());
    let msg = last_error().unwrap();
    assert!(msg.contains("not refuted"), "{msg}");
    unsafe { lrs_gamma_free(g) };
}

#[test]
fn error_paths_report_status_and_message() {
    // null arguments
    let mut h: *mut LrsRational = ptr::null_mut();
    assert_eq!(
        unsafe { lrs_rational_parse(ptr::null(), &mut h) },
        LrsStatus::NullArgument
    );
    assert!(last_error().unwrap().contains("null"));

    let text = CString::new("z").unwrap();
    assert_eq!(
        unsafe { lrs_rational_parse(text.as_ptr(), ptr::null_mut()) },
        LrsStatus::NullArgument
    );

    // invalid UTF-8
    assert_eq!(
        unsafe { lrs_rational_parse(c"\xff".as_ptr(), &mut h) },
        LrsStatus::InvalidUtf8
    );

    // malformed expression
    let broken = CString::new("1/(").unwrap();
    assert_eq!(
        unsafe { lrs_rational_parse(broken.as_ptr(), &mut h) },
        LrsStatus::SyntaxError
    );
    assert!(last_error().unwrap().contains("syntax error"));

    // denominator vanishing at the origin is invalid input, not a syntax error
    let pole = CString::new("1/z").unwrap();
    assert_eq!(
        unsafe { lrs_rational_parse(pole.as_ptr(), &mut h) },
        LrsStatus::InvalidInput
    );

    // a successful call clears the sticky message
    let ok = parse_rational("1/(1-z)");
    assert_eq!(last_error(), None);
    unsafe { lrs_rational_free(ok) };

    // frees tolerate null
    unsafe { lrs_string_free(ptr::null_mut()) };
    unsafe { lrs_rational_free(ptr::null_mut()) };
    unsafe { lrs_gamma_free(ptr::null_mut()) };
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/include/lrseq.h"
    ))
    .expect("build.rs generates include/lrseq.h");
    for name in [
        "lrs_version",
        "lrs_last_error",
        "lrs_string_free",
        "lrs_rational_parse",
        "lrs_rational_from_json",
        "lrs_rational_to_json",
        "lrs_rational_free",
        "lrs_rational_expand",
        "lrs_rational_zero_set",
        "lrs_rational_decompose",
        "lrs_rational_dominant",
        "lrs_gamma_from_json",
        "lrs_gamma_to_json",
        "lrs_gamma_free",
        "lrs_gamma_terms",
        "lrs_gamma_divisor_sums",
        "lrs_refute",
        "lrs_verify",
        "LRS_STATUS_CERTIFICATE_REJECTED",
    ] {
        assert!(header.contains(name), "header is missing {name}");
    }
}
