use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use effect_factor_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ef_last_error()) }.to_str().unwrap().to_string()
}

fn from_preset(name: &str) -> *mut EfFactored {
    let name = CString::new(name).unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ef_factored_from_preset(name.as_ptr(), 2, &mut h) }, EfStatus::Ok);
    assert!(!h.is_null());
    h
}

#[test]
fn saturate_and_read_tables() {
    let h = from_preset("state-write");
    let mut size = 0;
    unsafe {
        assert_eq!(ef_factored_saturate(h, 3, &mut size), EfStatus::Ok);
        assert_eq!(size, 9);
        assert_eq!(ef_factored_carrier_size(h, 3, &mut size), EfStatus::Ok);
        assert_eq!(size, 36);

        let mut len = 0;
        assert_eq!(ef_factored_n_table(h, 2, ptr::null_mut(), 0, &mut len), EfStatus::InvalidArgument);
        assert_eq!(len, 6);
        let mut buf = vec![0usize; len];
        assert_eq!(ef_factored_n_table(h, 2, buf.as_mut_ptr(), buf.len(), &mut len), EfStatus::Ok);
        let mut sorted = buf.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 6);
        assert!(buf.iter().all(|&t| t < 16));

        let mut trace = [0usize; 8];
        assert_eq!(ef_factored_layer_trace(h, 2, trace.as_mut_ptr(), trace.len(), &mut len), EfStatus::Ok);
        assert_eq!(&trace[..len], &[2, 6]);
        ef_factored_free(h);
    }
}

#[test]
fn verify_presets() {
    for name in ["state-read-write", "powerset-or", "cont-abort", "empty-signature"] {
        let h = from_preset(name);
        let mut failures = usize::MAX;
        let s = unsafe { ef_factored_verify(h, 2, 1, 2, 100_000, 0, &mut failures) };
        assert_eq!(s, EfStatus::Ok, "{name}: {}", last_error());
        assert_eq!(failures, 0);
        unsafe { ef_factored_free(h) };
    }
}

#[test]
fn error_codes() {
    let mut h = ptr::null_mut();
    let bad = CString::new("writer").unwrap();
    assert_eq!(unsafe { ef_factored_from_preset(bad.as_ptr(), 2, &mut h) }, EfStatus::InvalidConfig);
    assert!(last_error().contains("writer"));
    assert!(h.is_null());

    assert_eq!(unsafe { ef_factored_from_preset(ptr::null(), 2, &mut h) }, EfStatus::NullPointer);
    let mut size = 0;
    assert_eq!(unsafe { ef_factored_saturate(ptr::null_mut(), 1, &mut size) }, EfStatus::NullPointer);

    let cont = CString::new("objects = [5]\n[monad]\nkind = \"continuation\"\nsize = 4\n[[ops]]\nname = \"abort\"\n").unwrap();
    assert_eq!(unsafe { ef_factored_from_config(cont.as_ptr(), &mut h) }, EfStatus::Ok);
    assert_eq!(unsafe { ef_factored_saturate(h, 5, &mut size) }, EfStatus::InstanceTooLarge);
    assert!(last_error().contains("instance too large"));
    unsafe { ef_factored_free(h) };
    unsafe { ef_factored_free(ptr::null_mut()) };
}

#[test]
fn run_config_reports() {
    let sub = CString::new("factor").unwrap();
    let config = CString::new("preset = \"state-write\"\nobjects = [0, 1, 2, 3]\n").unwrap();
    let mut report = ptr::null_mut();
    let s = unsafe { ef_run_config(sub.as_ptr(), config.as_ptr(), 1, &mut report) };
    assert_eq!(s, EfStatus::Ok, "{}", last_error());
    let text = unsafe { CStr::from_ptr(report) }.to_str().unwrap().to_string();
    unsafe { ef_string_free(report) };
    let parsed: toml::Value = toml::from_str(&text).unwrap();
    let sizes: Vec<i64> = parsed["sections"]["cardinalities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["size"].as_integer().unwrap())
        .collect();
    assert_eq!(sizes, [0, 3, 6, 9]);

    let theory = CString::new("theory").unwrap();
    let fault = CString::new("preset = \"state-write\"\nobjects = [2]\n[fault]\nkind = \"merge-n\"\n").unwrap();
    let s = unsafe { ef_run_config(theory.as_ptr(), fault.as_ptr(), 0, &mut report) };
    assert_eq!(s, EfStatus::CheckFailed);
    assert!(!report.is_null());
    unsafe { ef_string_free(report) };

    let presets = CString::new("presets").unwrap();
    assert_eq!(unsafe { ef_run_config(presets.as_ptr(), ptr::null(), 0, &mut report) }, EfStatus::Ok);
    assert!(unsafe { CStr::from_ptr(report) }.to_str().unwrap().contains("cont-abort"));
    unsafe { ef_string_free(report) };

    let nope = CString::new("plot").unwrap();
    assert_eq!(unsafe { ef_run_config(nope.as_ptr(), ptr::null(), 0, &mut report) }, EfStatus::InvalidConfig);
    assert!(report.is_null());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(ef_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include")
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(header_dir().join("effect_factor.h")).unwrap();
    for name in [
        "typedef struct EfFactored EfFactored",
        "EF_STATUS_INSTANCE_TOO_LARGE = 3",
        "ef_factored_from_preset",
        "ef_factored_verify",
        "ef_run_config",
        "ef_string_free",
        "ef_last_error",
    ] {
        assert!(header.contains(name), "missing {name}");
    }
}

/// Compiles and runs a C client against the header and static library when a
/// C compiler is on the path.
#[test]
fn c_client_links() {
    let Ok(exe) = std::env::current_exe() else { return };
    let lib = exe.parent().and_then(|d| d.parent()).map(|d| d.join("libeffect_factor_ffi.a"));
    let Some(lib) = lib.filter(|l| l.exists()) else {
        eprintln!("static library not found next to the test binary; skipping");
        return;
    };
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("client.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include "effect_factor.h"
int main(void) {
    EfFactored *h = NULL;
    if (ef_factored_from_preset("state-read", 2, &h) != EF_STATUS_OK) return 10;
    size_t sizes[4];
    for (size_t x = 0; x < 4; x++)
        if (ef_factored_saturate(h, x, &sizes[x]) != EF_STATUS_OK) return 11;
    size_t failures = 0;
    if (ef_factored_verify(h, 1, 2, 1, 1000, 0, &failures) != EF_STATUS_OK) return 12;
    ef_factored_free(h);
    if (ef_factored_from_preset("nope", 2, &h) != EF_STATUS_INVALID_CONFIG) return 13;
    printf("%zu %zu %zu %zu %zu\n", sizes[0], sizes[1], sizes[2], sizes[3], failures);
    return 0;
}
"#,
    )
    .unwrap();
    let bin = dir.path().join("client");
    let status = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header_dir())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0 1 4 9 0\n");
}
