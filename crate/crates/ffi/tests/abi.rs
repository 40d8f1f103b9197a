use std::ffi::{c_char, CStr, CString};
use std::ptr;

use icefold_ffi::*;
use serde_json::Value;

const A3: &str = include_str!("../../../fixtures/a3.iq");
const A3_MODULE: &str = include_str!("../../../fixtures/a3-module.iq");

unsafe fn take(s: *mut c_char) -> Value {
    let v = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
    icefold_string_free(s);
    v
}

unsafe fn parse(text: &str) -> *mut IcefoldFile {
    let c = CString::new(text).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(icefold_file_parse(c.as_ptr(), &mut f), IcefoldStatus::Ok);
    f
}

#[test]
fn fold_matrix_through_the_abi() {
    unsafe {
        let f = parse(A3);
        let mut out = ptr::null_mut();
        assert_eq!(
            icefold_fold_matrix(f, IcefoldConvention::Row, &mut out),
            IcefoldStatus::Ok
        );
        let v = take(out);
        assert_eq!(v["entries"], serde_json::json!([[0, 2], [-1, 0], [1, 0], [0, 1]]));
        assert_eq!(v["column_symmetrizer"], serde_json::json!([2, 1]));
        icefold_file_free(f);
    }
}

#[test]
fn character_through_the_abi() {
    unsafe {
        let f = parse(A3_MODULE);
        let mut out = ptr::null_mut();
        assert_eq!(icefold_cluster_character(f, &mut out), IcefoldStatus::Ok);
        let v = take(out);
        assert_eq!(v["projected"], "x1*x2^-1*x4*x5 + x1^-1 + x1^-1*x2^-1*x4");
        icefold_file_free(f);

        let f = parse(A3);
        assert_eq!(icefold_cluster_character(f, &mut out), IcefoldStatus::Domain);
        icefold_file_free(f);
    }
}

#[test]
fn sessions_and_errors() {
    unsafe {
        let f = parse(A3);
        let mut s = ptr::null_mut();
        assert_eq!(icefold_session_new(f, &mut s), IcefoldStatus::Ok);
        icefold_file_free(f);
        assert_eq!(icefold_session_mutate(s, IcefoldMove::Orbit, 1), IcefoldStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(icefold_session_state(s, &mut out), IcefoldStatus::Ok);
        assert_eq!(take(out)["commutes"], true);

        assert_eq!(icefold_session_mutate(s, IcefoldMove::Orbit, 4), IcefoldStatus::Domain);
        let e = icefold_last_error();
        assert!(CStr::from_ptr(e).to_str().unwrap().contains("frozen"));
        icefold_string_free(e);

        let mut undone = false;
        assert_eq!(icefold_session_undo(s, &mut undone), IcefoldStatus::Ok);
        assert!(undone);
        assert!(icefold_last_error().is_null());
        icefold_session_free(s);

        assert_eq!(
            icefold_session_mutate(ptr::null_mut(), IcefoldMove::Vertex, 1),
            IcefoldStatus::NullPointer
        );
        let bad = CString::new("QUIVER x\nARROWS\na: 1 -> 2\n").unwrap();
        let mut f = ptr::null_mut();
        assert_eq!(icefold_file_parse(bad.as_ptr(), &mut f), IcefoldStatus::Parse);
        assert!(f.is_null());
        let invalid = [0xffu8, 0];
        assert_eq!(
            icefold_file_parse(invalid.as_ptr().cast(), &mut f),
            IcefoldStatus::InvalidUtf8
        );
    }
}

#[test]
fn c_program_links_against_the_header() {
    let root = env!("CARGO_MANIFEST_DIR");
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libicefold_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let exe = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("icefold_smoke");
    let status = std::process::Command::new("cc")
        .arg(format!("{root}/tests/c/smoke.c"))
        .arg(format!("-I{root}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe)
        .arg(format!("{root}/../../fixtures/a3.iq"))
        .output()
        .unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["rows"], serde_json::json!([1, 2, 4, 5]));
}
