use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use obstruct_ffi::*;

fn last_error() -> String {
    let p = obstruct_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    obstruct_string_free(s);
    out
}

#[test]
fn cohomology_ring_handle() {
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(obstruct_algebra_group_cohomology(3, 8, &mut alg), ObstructStatus::Ok);
        let mut dim = 0usize;
        assert_eq!(obstruct_algebra_dim(alg, 5, &mut dim), ObstructStatus::Ok);
        assert_eq!(dim, 1);
        let mut out = ptr::null_mut();
        let (x, xy) = (CString::new("X").unwrap(), CString::new("X*Y").unwrap());
        assert_eq!(obstruct_algebra_multiply(alg, x.as_ptr(), x.as_ptr(), &mut out), ObstructStatus::Ok);
        assert_eq!(take(out), "0");
        let y2 = CString::new("Y^2").unwrap();
        assert_eq!(obstruct_algebra_multiply(alg, xy.as_ptr(), y2.as_ptr(), &mut out), ObstructStatus::Ok);
        assert_eq!(take(out), "X*Y^3");
        assert_eq!(obstruct_algebra_dim(alg, 9, &mut dim), ObstructStatus::WindowOverflow);
        assert!(last_error().contains("window"));
        obstruct_algebra_free(alg);
    }
}

#[test]
fn presentation_from_json() {
    let json = CString::new(r#"{"char": 5, "generators": [{"name": "a", "degree": 1}, {"name": "b", "degree": 1}], "window": 4}"#).unwrap();
    unsafe {
        let mut alg = ptr::null_mut();
        assert_eq!(obstruct_algebra_from_json(json.as_ptr(), &mut alg), ObstructStatus::Ok);
        let mut dim = 0usize;
        obstruct_algebra_dim(alg, 3, &mut dim);
        assert_eq!(dim, 8);
        obstruct_algebra_free(alg);
        let bad = CString::new("{").unwrap();
        assert_eq!(obstruct_algebra_from_json(bad.as_ptr(), &mut alg), ObstructStatus::InvalidInput);
    }
}

#[test]
fn triple_product_verdicts() {
    unsafe {
        for (order, expect) in [(3, 1), (4, 0), (5, 0)] {
            let mut tp = ptr::null_mut();
            assert_eq!(obstruct_triple_product_cyclic(order, 10, &mut tp), ObstructStatus::Ok);
            let mut nontrivial = -1;
            assert_eq!(obstruct_triple_product_decide(tp, 6, &mut nontrivial), ObstructStatus::Ok);
            assert_eq!(nontrivial, expect, "order {order}");
            obstruct_triple_product_free(tp);
        }
        let mut tp = ptr::null_mut();
        assert_eq!(obstruct_triple_product_cyclic(6, 4, &mut tp), ObstructStatus::InvalidInput);
        assert_eq!(obstruct_triple_product_cyclic(3, 1000, &mut tp), ObstructStatus::WindowOverflow);
        assert!(tp.is_null());
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        assert_eq!(obstruct_algebra_group_cohomology(3, 4, ptr::null_mut()), ObstructStatus::NullPointer);
        assert!(last_error().contains("out"));
        let mut dim = 0usize;
        assert_eq!(obstruct_algebra_dim(ptr::null(), 0, &mut dim), ObstructStatus::NullPointer);
        let mut out = ptr::null_mut();
        assert_eq!(obstruct_run(ptr::null(), &mut out), ObstructStatus::NullPointer);
        obstruct_string_free(ptr::null_mut());
        obstruct_algebra_free(ptr::null_mut());
    }
}

#[test]
fn run_matches_the_command_line() {
    let args = CString::new(r#"["m3", "cyclic:3", "--window", "6"]"#).unwrap();
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(obstruct_run(args.as_ptr(), &mut out), ObstructStatus::Ok);
        assert!(obstruct_last_error().is_null());
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["class"]["verdict"], "NONTRIVIAL");
        let bad = CString::new(r#"["m3"]"#).unwrap();
        assert_eq!(obstruct_run(bad.as_ptr(), &mut out), ObstructStatus::InvalidInput);
        let wide = CString::new(r#"["--window", "999", "m3", "cyclic:3"]"#).unwrap();
        assert_eq!(obstruct_run(wide.as_ptr(), &mut out), ObstructStatus::WindowOverflow);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(obstruct_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/obstruct.h")
}

fn library_dir() -> PathBuf {
    // tests/<name>-<hash> lives in target/<profile>/deps
    std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn header_compiles_as_c_and_cpp() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let h = header();
    for (lang, std) in [("c", "-std=c11"), ("c++", "-std=c++17")] {
        let out = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, std])
            .arg(&h)
            .output()
            .unwrap();
        assert!(out.status.success(), "{lang}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "obstruct.h"

int main(void) {
    ObstructTripleProduct *tp = NULL;
    int32_t nontrivial = -1;
    if (obstruct_triple_product_cyclic(3, 10, &tp) != OBSTRUCT_STATUS_OK) return 10;
    if (obstruct_triple_product_decide(tp, 6, &nontrivial) != OBSTRUCT_STATUS_OK) return 11;
    obstruct_triple_product_free(tp);
    ObstructAlgebra *alg = NULL;
    if (obstruct_algebra_group_cohomology(9, 2, &alg) != OBSTRUCT_STATUS_OK) return 12;
    size_t dim = 0;
    if (obstruct_algebra_dim(alg, 3, &dim) != OBSTRUCT_STATUS_WINDOW_OVERFLOW) return 13;
    if (obstruct_last_error() == NULL) return 14;
    obstruct_algebra_free(alg);
    printf("%d\n", nontrivial);
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let lib = library_dir();
    if !have_cc() || !lib.join("libobstruct_ffi.so").exists() {
        eprintln!("no C compiler or shared library; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("main.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let exe = dir.path().join("main");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg("-L")
        .arg(&lib)
        .arg(format!("-Wl,-rpath,{}", lib.display()))
        .args(["-lobstruct_ffi", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1");
}
