use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use hopf_kh_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { hk_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(hk_last_error()) }.to_str().unwrap().to_string()
}

#[test]
fn hopf_round_trip() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { hk_library_diagram(cstr("hopf-plus").as_ptr(), &mut d) }, HK_OK);
    let mut n = 0usize;
    assert_eq!(unsafe { hk_diagram_component_count(d, &mut n) }, HK_OK);
    assert_eq!(n, 2);
    let mut lk = 0i64;
    assert_eq!(unsafe { hk_linking_number(d, 0, 1, &mut lk) }, HK_OK);
    assert_eq!(lk, 1);
    let mut bound = 0usize;
    assert_eq!(unsafe { hk_koszul_bound(d, &mut bound) }, HK_OK);
    assert_eq!(bound, 4);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hk_kh_json(d, HK_COEFF_Z, false, -1, &mut s) }, HK_OK);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["groups"].as_array().unwrap().len(), 4);
    assert_eq!(unsafe { hk_detect_json(d, &mut s) }, HK_OK);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["verdict"], "IsHopfPositive");
    assert_eq!(unsafe { hk_alexander_json(d, &mut s) }, HK_OK);
    assert!(take(s).contains("t^(1/2) - t^(-1/2)"));
    assert_eq!(unsafe { hk_jones_json(d, &mut s) }, HK_OK);
    take(s);
    unsafe { hk_diagram_free(d) };
}

#[test]
fn error_codes() {
    let mut d = ptr::null_mut();
    assert_eq!(unsafe { hk_diagram_parse(ptr::null(), &mut d) }, HK_NULL_POINTER);
    assert_eq!(unsafe { hk_diagram_parse(cstr("PD[X[1,2,3]").as_ptr(), &mut d) }, HK_PARSE_ERROR);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { hk_library_diagram(cstr("nope").as_ptr(), &mut d) }, HK_PARSE_ERROR);
    assert!(last_error().contains("nope"));
    let bad = [0xffu8, 0];
    assert_eq!(unsafe { hk_diagram_parse(bad.as_ptr() as *const c_char, &mut d) }, HK_INVALID_UTF8);

    assert_eq!(unsafe { hk_diagram_parse(cstr("PD[X[2,4,1,3],X[4,2,3,1]]").as_ptr(), &mut d) }, HK_OK);
    assert!(last_error().is_empty());
    let mut lk = 0i64;
    assert_eq!(unsafe { hk_linking_number(d, 0, 5, &mut lk) }, HK_INVALID_ARGUMENT);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { hk_kh_json(d, 9, false, -1, &mut s) }, HK_INVALID_ARGUMENT);
    assert_eq!(unsafe { hk_kh_json(d, HK_COEFF_F2, false, -1, ptr::null_mut()) }, HK_NULL_POINTER);
    assert_eq!(unsafe { hk_koszul_bound(ptr::null(), &mut 0) }, HK_NULL_POINTER);
    unsafe { hk_diagram_free(d) };

    assert_eq!(unsafe { hk_library_diagram(cstr("unknot").as_ptr(), &mut d) }, HK_OK);
    assert_eq!(unsafe { hk_koszul_bound(d, &mut 0) }, HK_INVALID_ARGUMENT);
    unsafe { hk_diagram_free(d) };
    unsafe { hk_diagram_free(ptr::null_mut()) };
    unsafe { hk_string_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/hopf_kh.h")).unwrap();
    for f in [
        "hk_diagram_parse",
        "hk_library_diagram",
        "hk_diagram_free",
        "hk_diagram_component_count",
        "hk_linking_number",
        "hk_kh_json",
        "hk_jones_json",
        "hk_alexander_json",
        "hk_koszul_bound",
        "hk_detect_json",
        "hk_string_free",
        "hk_last_error",
        "typedef struct HkDiagram HkDiagram",
        "#define HK_PANIC 6",
    ] {
        assert!(header.contains(f), "{f}");
    }
}

/// Compiles a small C program against the header and the static library.
#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/abi-... -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    // cargo test does not refresh the staticlib artifact
    let mut build = Command::new(std::env::var("CARGO").unwrap_or_else(|_| "cargo".into()));
    build.args(["build", "-p", "hopf-kh-ffi", "--lib"]);
    if profile_dir.file_name().is_some_and(|n| n == "release") {
        build.arg("--release");
    }
    assert!(build.status().unwrap().success(), "building the static library failed");
    let lib = profile_dir.join("libhopf_kh_ffi.a");
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = dir.join("smoke.c");
    let bin = dir.join("smoke");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "hopf_kh.h"
int main(void) {
    HkDiagram *d = NULL;
    if (hk_library_diagram("hopf-minus", &d) != HK_OK) return 1;
    char *json = NULL;
    if (hk_detect_json(d, &json) != HK_OK) return 2;
    int ok = strstr(json, "\"IsHopfNegative\"") != NULL;
    hk_string_free(json);
    hk_diagram_free(d);
    if (hk_library_diagram("missing", &d) != HK_PARSE_ERROR) return 3;
    printf("%s\n", hk_last_error());
    return ok ? 0 : 4;
}
"#,
    )
    .unwrap();
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("missing"));
}
