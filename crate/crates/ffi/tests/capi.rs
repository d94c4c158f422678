//! Exercises the C ABI from Rust, the same way a foreign caller would.

use std::ffi::{CStr, CString};
use std::ptr;

use unirigid::fq::FqField;
use unirigid::groups::Heis;
use unirigid::harness::HeisDeck;
use unirigid::rigidity::heis_sample_set;
use unirigid_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ur_last_error()) }.to_string_lossy().into_owned()
}

fn field(p: u32, d: u32) -> *mut UrField {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { ur_field_new(p, d, &mut f) }, UrStatus::Ok);
    f
}

fn pol(f: *const UrField, c: &[u32]) -> *mut UrPol {
    let mut a = ptr::null_mut();
    assert_eq!(unsafe { ur_pol_new(f, c.as_ptr(), c.len(), &mut a) }, UrStatus::Ok, "{}", last_error());
    a
}

fn coeffs(a: *const UrPol) -> Vec<u32> {
    let mut len = 0;
    let first = unsafe { ur_pol_coeffs(a, ptr::null_mut(), 0, &mut len) };
    assert_eq!(first, if len == 0 { UrStatus::Ok } else { UrStatus::BufferTooSmall });
    let mut buf = vec![0u32; len];
    assert_eq!(unsafe { ur_pol_coeffs(a, buf.as_mut_ptr(), buf.len(), &mut len) }, UrStatus::Ok);
    buf
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { ur_string_free(s) };
    out
}

#[test]
fn field_handles_and_errors() {
    let f = field(3, 2);
    assert_eq!(unsafe { ur_field_q(f) }, 9);
    assert_eq!(unsafe { ur_field_q(ptr::null()) }, 0);
    unsafe { ur_field_free(f) };

    let mut bad = ptr::null_mut();
    assert_eq!(unsafe { ur_field_new(4, 1, &mut bad) }, UrStatus::Parameter);
    assert!(bad.is_null());
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ur_field_new(3, 1, ptr::null_mut()) }, UrStatus::NullPointer);
    assert!(unsafe { CStr::from_ptr(ur_version()) }.to_str().unwrap().starts_with("0."));
}

#[test]
fn polynomial_round_trip() {
    let f = field(3, 1);
    let a = pol(f, &[1, 2, 0, 0]);
    assert_eq!(coeffs(a), vec![1, 2]);
    let mut deg = 0;
    assert_eq!(unsafe { ur_pol_degree(a, &mut deg) }, UrStatus::Ok);
    assert_eq!(deg, 1);

    let z = pol(f, &[]);
    assert_eq!(unsafe { ur_pol_degree(z, &mut deg) }, UrStatus::Ok);
    assert_eq!(deg, -1);

    let mut short = [0u32; 1];
    let mut len = 0;
    assert_eq!(unsafe { ur_pol_coeffs(a, short.as_mut_ptr(), 1, &mut len) }, UrStatus::BufferTooSmall);
    assert_eq!(len, 2);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ur_pol_new(f, [3u32].as_ptr(), 1, &mut out) }, UrStatus::Parameter);
    assert!(out.is_null());
    unsafe {
        ur_pol_free(a);
        ur_pol_free(z);
        ur_field_free(f);
    }
}

#[test]
fn bracket_matches_hand_computation() {
    // Over F_3 with e = 3: a = 1 + t⁻¹, b = t⁻¹.
    // a³b − ab³ = (t⁻¹ + t⁻⁴) − (t⁻³ + t⁻⁴) = t⁻¹ − t⁻³.
    let f = field(3, 1);
    let a = pol(f, &[1, 1]);
    let b = pol(f, &[0, 1]);
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ur_pol_bracket(f, 3, a, b, &mut c) }, UrStatus::Ok);
    assert_eq!(coeffs(c), vec![0, 1, 0, 2]);
    assert_eq!(unsafe { ur_pol_bracket(f, 4, a, b, &mut c) }, UrStatus::Parameter);
    assert!(c.is_null());

    let other = field(5, 1);
    let x = pol(other, &[1]);
    assert_eq!(unsafe { ur_pol_bracket(f, 3, a, x, &mut c) }, UrStatus::Parameter);
    assert!(last_error().contains("different field"));
    unsafe {
        ur_pol_free(a);
        ur_pol_free(b);
        ur_pol_free(x);
        ur_field_free(f);
        ur_field_free(other);
    }
}

#[test]
fn power_and_separability_predicates() {
    let f = field(3, 1);
    let one = pol(f, &[1]);
    // (1 + t⁻¹)³ = 1 + t⁻³ over F_3.
    let cube = pol(f, &[1, 0, 0, 1]);
    let lin = pol(f, &[0, 1]);
    let mut yes = false;
    assert_eq!(unsafe { ur_eth_power_ratio(f, one, cube, 3, &mut yes) }, UrStatus::Ok);
    assert!(yes);
    assert_eq!(unsafe { ur_eth_power_ratio(f, one, lin, 3, &mut yes) }, UrStatus::Ok);
    assert!(!yes);
    let zero = pol(f, &[]);
    assert_eq!(unsafe { ur_eth_power_ratio(f, zero, lin, 3, &mut yes) }, UrStatus::Domain);

    assert_eq!(unsafe { ur_is_q_separable(f, cube, 3, &mut yes) }, UrStatus::Ok);
    assert!(!yes);
    assert_eq!(unsafe { ur_is_q_separable(f, cube, 9, &mut yes) }, UrStatus::Ok);
    assert!(yes);
    unsafe {
        for p in [one, cube, lin, zero] {
            ur_pol_free(p);
        }
        ur_field_free(f);
    }
}

#[test]
fn suite_runs_and_reports() {
    let name = CString::new("group-laws").unwrap();
    let cfg = CString::new(r#"{"trials": 5, "seed": 9}"#).unwrap();
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { ur_run_suite(name.as_ptr(), cfg.as_ptr(), &mut r) }, UrStatus::Ok, "{}", last_error());
    let (mut passed, mut total) = (0, 0);
    assert_eq!(unsafe { ur_report_counts(r, &mut passed, &mut total) }, UrStatus::Ok);
    assert_eq!((passed, total), (5, 5));

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ur_report_jsonl(r, &mut s) }, UrStatus::Ok);
    let text = take_string(s);
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[5]["type"], "summary");
    assert_eq!(lines[5]["config"]["seed"], 9);
    unsafe { ur_report_free(r) };
}

#[test]
fn suite_failures_map_to_codes() {
    let run = |name: &str, cfg: Option<&str>| {
        let name = CString::new(name).unwrap();
        let cfg = cfg.map(|c| CString::new(c).unwrap());
        let mut r = ptr::null_mut();
        let code = unsafe { ur_run_suite(name.as_ptr(), cfg.as_ref().map_or(ptr::null(), |c| c.as_ptr()), &mut r) };
        assert!(r.is_null() || code == UrStatus::Ok);
        unsafe { ur_report_free(r) };
        code
    };
    assert_eq!(run("no-such-suite", None), UrStatus::Usage);
    assert_eq!(run("prop-ab", Some("{not json")), UrStatus::Json);
    assert_eq!(run("prop-ab", Some(r#"{"p": 2, "e": 2, "qs": [2, 4], "trials": 2}"#)), UrStatus::Hypothesis);
    assert!(last_error().contains("e > 2"));
    assert_eq!(unsafe { ur_run_suite(ptr::null(), ptr::null(), ptr::null_mut()) }, UrStatus::NullPointer);
}

#[test]
fn solve_identity_heisenberg_deck() {
    let f = FqField::new(3, 1).unwrap();
    let heis = Heis::new(1, &f).unwrap();
    let samples = heis_sample_set(&heis).into_iter().map(|g| (g.clone(), g)).collect();
    let deck = HeisDeck { field: f.to_params(), m: 1, samples };
    let json = CString::new(serde_json::to_string(&deck).unwrap()).unwrap();
    let kind = CString::new("heis").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ur_solve(kind.as_ptr(), json.as_ptr(), &mut s) }, UrStatus::Ok, "{}", last_error());
    let sol: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    // The identity map: T = I, τ = id and every ζ vanishes.
    let one = serde_json::json!({"num": {"coeffs": [1]}, "den": {"coeffs": [1]}});
    let zero = serde_json::json!({"num": {"coeffs": []}, "den": {"coeffs": [1]}});
    assert_eq!(sol["t"], serde_json::json!([[one, zero], [zero, one]]));
    assert_eq!(sol["tau"], serde_json::json!({"sigma": {"power": 0}, "alpha": 1, "beta": 0}));
    assert!(sol["zeta"].as_array().unwrap().iter().all(|z| *z == zero));

    let bogus = CString::new("sl2").unwrap();
    assert_eq!(unsafe { ur_solve(bogus.as_ptr(), json.as_ptr(), &mut s) }, UrStatus::Usage);
    assert!(s.is_null());
    let g2 = CString::new("g2").unwrap();
    assert_eq!(unsafe { ur_solve(g2.as_ptr(), json.as_ptr(), &mut s) }, UrStatus::Json);
}
