use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use enumirror_ffi::*;

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    em_string_free(s);
    out
}

unsafe fn last_error() -> String {
    let p = em_last_error();
    assert!(!p.is_null());
    CStr::from_ptr(p).to_string_lossy().into_owned()
}

#[test]
fn key_lifecycle_and_series() {
    unsafe {
        let mut key = ptr::null_mut();
        assert_eq!(em_key_new(EmRole::Sl, 3, 2, 1, 1, &mut key), EmStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(em_key_series_json(key, 8, &mut json), EmStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(json)).unwrap();
        let exps: Vec<&str> = v["terms"].as_array().unwrap().iter().map(|t| t["exponent"].as_str().unwrap()).collect();
        assert_eq!(exps, ["1", "4", "7"]);
        em_key_free(key);
    }
}

#[test]
fn w0_is_a_fraction() {
    unsafe {
        let mut key = ptr::null_mut();
        assert_eq!(em_key_new(EmRole::Sl, 2, 2, 0, 0, &mut key), EmStatus::Ok);
        let (mut n, mut d) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(em_key_w0(key, &mut n, &mut d), EmStatus::Ok);
        let (n, d) = (take(n), take(d));
        assert!(n.parse::<i64>().is_ok());
        assert!(d.parse::<u64>().unwrap() > 0);
        em_key_free(key);
    }
}

#[test]
fn errors_map_to_codes() {
    unsafe {
        let mut key = ptr::null_mut();
        assert_eq!(em_key_new(EmRole::Pgl, 4, 2, 0, 0, &mut key), EmStatus::UnsupportedRank);
        assert!(key.is_null());
        assert!(last_error().contains("r = 4"));
        assert_eq!(em_key_new(EmRole::Pgl, 3, 2, 3, 0, &mut key), EmStatus::OutOfRange);
        assert_eq!(em_key_new(EmRole::Pgl, 3, 2, 0, 0, ptr::null_mut()), EmStatus::NullPointer);
        let mut json = ptr::null_mut();
        assert_eq!(em_key_series_json(ptr::null(), 4, &mut json), EmStatus::NullPointer);
        let mut rep = ptr::null_mut();
        let bad = CString::new(r#"{"rank": 2, "bogus": 1}"#).unwrap();
        assert_eq!(em_run(bad.as_ptr(), &mut rep), EmStatus::Config);
        let bad = CString::new(r#"{"checks": ["nope"]}"#).unwrap();
        assert_eq!(em_run(bad.as_ptr(), &mut rep), EmStatus::Config);
        // success clears the message
        assert_eq!(em_key_new(EmRole::Pgl, 3, 2, 0, 0, &mut key), EmStatus::Ok);
        assert!(em_last_error().is_null());
        em_key_free(key);
        assert_eq!(em_report_exit_code(ptr::null()), -1);
    }
}

#[test]
fn run_matches_library() {
    let cfg = r#"{"rank": 2, "genus": [2], "checks": ["mirror-w0", "d0", "genser"]}"#;
    unsafe {
        let c = CString::new(cfg).unwrap();
        let mut rep = ptr::null_mut();
        assert_eq!(em_run(c.as_ptr(), &mut rep), EmStatus::Ok);
        let (mut p, mut f, mut u) = (0usize, 0usize, 0usize);
        assert_eq!(em_report_counts(rep, &mut p, &mut f, &mut u), EmStatus::Ok);
        assert_eq!((p, f, u), (2, 1, 0));
        assert_eq!(em_report_exit_code(rep), 1);
        let mut json = ptr::null_mut();
        assert_eq!(em_report_json(rep, &mut json), EmStatus::Ok);
        let direct = enumirror::cli::run(&serde_json::from_str(cfg).unwrap()).unwrap().to_json();
        assert_eq!(take(json), direct);
        em_report_free(rep);
    }
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/enumirror.h");
    let src = format!("#include \"{header}\"\nint main(void) {{ em_status s = EM_STATUS_OK; return (int)s; }}\n");
    let dir = std::env::temp_dir().join(format!("enumirror-hdr-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("t.c");
    std::fs::write(&file, src).unwrap();
    match Command::new("cc").args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&file).output() {
        Ok(out) => assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr)),
        Err(_) => eprintln!("no C compiler; skipped"),
    }
    let _ = std::fs::remove_dir_all(&dir);
}
