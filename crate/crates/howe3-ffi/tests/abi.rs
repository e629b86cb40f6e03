use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use howe3_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { howe3_string_free(s) };
    out
}

fn last_error() -> String {
    let e = howe3_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_str().unwrap().to_string()
}

fn enumerate(p: u64, kind: Howe3Kind) -> *mut Howe3Report {
    let mut r = ptr::null_mut();
    assert_eq!(unsafe { howe3_enumerate(p, kind as u32, 2, &mut r) }, Howe3Status::Ok);
    r
}

#[test]
fn report_handle() {
    let r = enumerate(23, Howe3Kind::OortType);
    unsafe {
        assert_eq!(howe3_report_p(r), 23);
        assert_eq!(howe3_report_total(r), 3);
        let mut n = 0;
        let g = CString::new("total").unwrap();
        assert_eq!(howe3_report_tally(r, g.as_ptr(), 0, &mut n), Howe3Status::Ok);
        assert_eq!(n, 3);

        let mut s = ptr::null_mut();
        assert_eq!(howe3_report_curve(r, 0, &mut s), Howe3Status::Ok);
        assert!(take(s).starts_with("hyperelliptic: 23;"));
        assert_eq!(howe3_report_curve(r, 3, &mut s), Howe3Status::InvalidInput);
        assert!(last_error().contains("out of range"));

        let mut ok = 0;
        assert_eq!(howe3_report_verify_extremality(r, Howe3Extremality::Expected as u32, &mut ok), Howe3Status::Ok);
        assert_eq!(ok, 1);
        assert_eq!(howe3_report_verify_extremality(r, Howe3Extremality::Minimal as u32, &mut ok), Howe3Status::Ok);
        assert_eq!(ok, 0);

        assert_eq!(howe3_report_to_json(r, &mut s), Howe3Status::Ok);
        let json = CString::new(take(s)).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(howe3_report_from_json(json.as_ptr(), &mut back), Howe3Status::Ok);
        assert_eq!(howe3_report_total(back), 3);
        howe3_report_free(back);
        howe3_report_free(r);
    }
}

#[test]
fn error_codes() {
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(howe3_enumerate(15, 0, 1, &mut r), Howe3Status::InvalidInput);
        assert!(last_error().starts_with("NotPrime"));
        assert!(r.is_null());
        assert_eq!(howe3_enumerate(11, 7, 1, &mut r), Howe3Status::InvalidInput);
        assert_eq!(howe3_enumerate(11, 0, 1, ptr::null_mut()), Howe3Status::NullArgument);
        assert_eq!(howe3_report_tally(ptr::null(), ptr::null(), 0, ptr::null_mut()), Howe3Status::NullArgument);
        assert_eq!(howe3_report_total(ptr::null()), 0);
        let bad = CString::new("{").unwrap();
        assert_eq!(howe3_report_from_json(bad.as_ptr(), &mut r), Howe3Status::InvalidInput);
        // success clears the slot
        assert_eq!(howe3_enumerate(5, 0, 1, &mut r), Howe3Status::Ok);
        assert!(howe3_last_error().is_null());
        howe3_report_free(r);
        howe3_report_free(ptr::null_mut());
        howe3_string_free(ptr::null_mut());
    }
}

#[test]
fn exists_and_curves() {
    unsafe {
        let (mut found, mut w) = (0u32, ptr::null_mut());
        assert_eq!(howe3_exists(11, Howe3Kind::Quartic as u32, &mut found, &mut w), Howe3Status::Ok);
        assert_eq!(found, 1);
        let text = CString::new(take(w)).unwrap();
        assert_eq!(howe3_exists(13, Howe3Kind::OortType as u32, &mut found, ptr::null_mut()), Howe3Status::Ok);
        assert_eq!(found, 0);

        let mut c = ptr::null_mut();
        assert_eq!(howe3_curve_parse(text.as_ptr(), &mut c), Howe3Status::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(howe3_curve_invariants_json(c, &mut s), Howe3Status::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["type"], "invariants");
        assert_eq!(v["aut_order"].as_u64().map(|r| r % 4), Some(0));
        howe3_curve_free(c);

        let g2 = CString::new("hyperelliptic:17; 0; 16,0,0,0,0,0,0,0,1").unwrap();
        assert_eq!(howe3_curve_parse(g2.as_ptr(), &mut c), Howe3Status::Ok);
        assert_eq!(howe3_curve_richelot_json(c, &mut s), Howe3Status::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
        assert_eq!(v["type"], "richelot");
        howe3_curve_free(c);

        let junk = CString::new("quartic:1,2").unwrap();
        assert_eq!(howe3_curve_parse(junk.as_ptr(), &mut c), Howe3Status::InvalidInput);
    }
}

fn target_dir() -> PathBuf {
    // target/<profile>/deps/abi-xxxx
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_header() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir();
    if !lib.join("libhowe3_ffi.so").exists() {
        eprintln!("shared library not built, skipping");
        return;
    }
    let tmp = std::env::temp_dir().join(format!("howe3-smoke-{}", std::process::id()));
    let st = Command::new(&cc)
        .arg(dir.join("examples/smoke.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg("-L")
        .arg(&lib)
        .arg("-lhowe3_ffi")
        .arg("-o")
        .arg(&tmp)
        .status()
        .unwrap();
    assert!(st.success());
    let out = Command::new(&tmp).env("LD_LIBRARY_PATH", &lib).output().unwrap();
    let _ = std::fs::remove_file(&tmp);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    assert!(text.contains("p=23 total=6 tally=6"), "{text}");
    assert!(text.contains("status=2 error=NotPrime"), "{text}");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc.into());
        }
    }
    Err(())
}
