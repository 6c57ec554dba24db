use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use m24_ffi::*;

struct Ctx(*mut M24Context);

impl Ctx {
    fn new() -> Self {
        let c = m24_context_new();
        assert!(!c.is_null());
        Ctx(c)
    }

    fn error(&self) -> String {
        unsafe { CStr::from_ptr(m24_last_error(self.0)) }.to_string_lossy().into_owned()
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { m24_context_free(self.0) }
    }
}

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { m24_string_free(s) };
    text
}

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn coefficients_through_the_abi() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let st = unsafe { m24_coeffs_json(ctx.0, cs("H").as_ptr(), cs("2A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::Ok);
    let v: serde_json::Value = serde_json::from_str(take(out).trim()).unwrap();
    assert_eq!(v["kind"], "H");
    assert_eq!(v["class"], "2A");
    let vals: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["value"].as_str().unwrap()).collect();
    assert_eq!(vals, ["-6", "14", "-28", "42", "-56"]);
    assert_eq!(ctx.error(), "");
}

#[test]
fn several_classes_give_one_line_each() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let st = unsafe { m24_coeffs_json(ctx.0, cs("eta-inverse").as_ptr(), cs("1A,2A").as_ptr(), 2, 1, 1, &mut out) };
    assert_eq!(st, M24Status::Ok);
    let text = take(out);
    let first: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(first.len(), 2);
    assert_eq!(first[0]["rows"][0]["value"], "24");
    assert_eq!(first[1]["rows"][0]["value"], "8");
}

#[test]
fn usage_errors_set_a_message() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let st = unsafe { m24_coeffs_json(ctx.0, cs("H").as_ptr(), cs("7A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::Usage);
    assert!(out.is_null());
    assert!(ctx.error().contains("7A"), "{}", ctx.error());
    let st = unsafe { m24_coeffs_json(ctx.0, cs("theta").as_ptr(), cs("1A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::Usage);
    let st = unsafe { m24_decompose_json(ctx.0, cs("K").as_ptr(), 0, &mut out) };
    assert_eq!(st, M24Status::Usage);
}

#[test]
fn null_and_invalid_arguments() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let st = unsafe { m24_coeffs_json(ctx.0, ptr::null(), cs("1A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::NullArgument);
    let st = unsafe { m24_coeffs_json(ctx.0, cs("H").as_ptr(), cs("1A").as_ptr(), 5, 1, 1, ptr::null_mut()) };
    assert_eq!(st, M24Status::NullArgument);
    let st = unsafe { m24_coeffs_json(ptr::null_mut(), cs("H").as_ptr(), cs("1A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::NullArgument);
    let bad = [0xffu8, 0];
    let st = unsafe { m24_coeffs_json(ctx.0, bad.as_ptr().cast(), cs("1A").as_ptr(), 5, 1, 1, &mut out) };
    assert_eq!(st, M24Status::InvalidUtf8);
    unsafe {
        m24_string_free(ptr::null_mut());
        m24_context_free(ptr::null_mut());
        assert_eq!(CStr::from_ptr(m24_last_error(ptr::null())).to_bytes(), b"");
    }
}

#[test]
fn decomposition_report() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let st = unsafe { m24_decompose_json(ctx.0, cs("K").as_ptr(), 1, &mut out) };
    assert_eq!(st, M24Status::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    let labels = v["irreducibles"].as_array().unwrap();
    let row = v["rows"][0]["values"].as_array().unwrap();
    let nonzero: Vec<&str> = labels.iter().zip(row).filter(|(_, m)| *m != "0").map(|(l, _)| l.as_str().unwrap()).collect();
    assert_eq!(nonzero, ["45", "45b"]);
}

#[test]
fn verification_counts_failures() {
    let ctx = Ctx::new();
    let mut out = ptr::null_mut();
    let mut failed = usize::MAX;
    let st = unsafe { m24_verify_json(ctx.0, cs("tables").as_ptr(), cs("2B").as_ptr(), &mut out, &mut failed) };
    assert_eq!(st, M24Status::Ok);
    assert_eq!(failed, 0);
    let text = take(out);
    assert!(text.lines().any(|l| l.contains("\"eta_inverse_table\"") && l.contains("\"2B\"")));
    let st = unsafe { m24_verify_json(ctx.0, cs("nothing").as_ptr(), cs("all").as_ptr(), &mut out, &mut failed) };
    assert_eq!(st, M24Status::Usage);
}

#[test]
fn version_is_the_crate_version() {
    let v = unsafe { CStr::from_ptr(m24_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "m24.h"

int main(void) {
    M24Context *ctx = m24_context_new();
    if (!ctx) return 10;
    char *out = NULL;
    M24Status st = m24_coeffs_json(ctx, "Z-disc", "1A", 4, 1, 1, &out);
    if (st != M24_STATUS_OK) return 11;
    if (!strstr(out, "\"value\":\"-128\"")) return 12;
    printf("%s", out);
    m24_string_free(out);
    st = m24_coeffs_json(ctx, "Z-disc", "nope", 4, 1, 1, &out);
    if (st != M24_STATUS_USAGE || out != NULL) return 13;
    if (strlen(m24_last_error(ctx)) == 0) return 14;
    m24_context_free(ctx);
    return 0;
}
"#;

/// Compiles a C caller against the generated header and the static library.
#[test]
fn c_caller_links_against_the_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let header_dir = manifest.join("include");
    assert!(header_dir.join("m24.h").exists());
    // test binaries live in <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libm24_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = std::env::temp_dir().join(format!("m24-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("caller.c");
    let bin = dir.join("caller");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let cc = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(&header_dir)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .output()
        .expect("a C compiler on PATH");
    assert!(cc.status.success(), "{}", String::from_utf8_lossy(&cc.stderr));
    let run = Command::new(&bin).output().unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    assert!(run.status.success(), "exit {:?}", run.status.code());
    let v: serde_json::Value = serde_json::from_slice(&run.stdout).unwrap();
    assert_eq!(v["rows"][2]["value"], "-128");
}
