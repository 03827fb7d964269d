use std::ffi::{c_char, CStr, CString};
use std::process::Command;
use std::ptr;

use sadic_ffi::*;

const FIB: &str = "fib = \"1->12, 2->1\"\nsequence = periodic [fib]\nmodel = iid [fib]\nsteps = 500\nclassifier_depth = 2000\nfractal_depth = 2000\n";

fn system(text: &str) -> (SadicStatus, *mut SadicSystem) {
    let text = CString::new(text).unwrap();
    let mut sys = ptr::null_mut();
    let status = unsafe { sadic_system_from_config(text.as_ptr(), &mut sys) };
    (status, sys)
}

fn take(s: *mut c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { sadic_string_free(s) };
    out
}

fn last_error() -> String {
    let p = sadic_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

#[test]
fn round_trip() {
    let (status, sys) = system(FIB);
    assert_eq!(status, SadicStatus::Ok);
    let mut out = ptr::null_mut();

    assert_eq!(unsafe { sadic_coincidence_json(sys, 5, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["n"], 1);

    assert_eq!(unsafe { sadic_balance_json(sys, 0, 40, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["C"], 1);

    assert_eq!(unsafe { sadic_eigen_json(sys, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert!((v["u"][1].as_f64().unwrap() - 0.618_033_988_749_895).abs() < 1e-12);

    assert_eq!(unsafe { sadic_lyapunov_json(sys, 1000, 4, 3, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["pisot"], "satisfied");

    assert_eq!(unsafe { sadic_verify_json(sys, &mut out) }, SadicStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["schema_version"], 1);

    unsafe { sadic_system_free(sys) };
}

#[test]
fn error_codes() {
    let (status, sys) = system("");
    assert_eq!(status, SadicStatus::ConfigError);
    assert!(sys.is_null());
    assert!(last_error().contains("line 1"));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { sadic_verify_json(ptr::null(), &mut out) }, SadicStatus::NullPointer);
    assert_eq!(unsafe { sadic_system_from_config(ptr::null(), ptr::null_mut()) }, SadicStatus::NullPointer);

    let bad = [0xffu8, 0];
    let mut sys = ptr::null_mut();
    assert_eq!(
        unsafe { sadic_system_from_config(bad.as_ptr().cast(), &mut sys) },
        SadicStatus::InvalidUtf8
    );

    // Window shorter than the coincidence cap.
    let (status, sys) = system("fib = \"1->12, 2->1\"\nsequence = window [fib]\n");
    assert_eq!(status, SadicStatus::Ok);
    assert_eq!(unsafe { sadic_coincidence_json(sys, 4, &mut out) }, SadicStatus::PreconditionViolated);
    assert!(last_error().contains("horizon"));
    unsafe {
        sadic_system_free(sys);
        sadic_system_free(ptr::null_mut());
        sadic_string_free(ptr::null_mut());
    }
}

#[test]
fn version_matches() {
    let v = unsafe { CStr::from_ptr(sadic_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/sadic.h");
    let Ok(out) = Command::new("cc").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c", header]).output() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_against_staticlib() {
    let exe = std::env::current_exe().unwrap();
    // target/<profile>/deps/abi-… → target/<profile>/libsadic_ffi.a
    let lib = exe.parent().and_then(|d| d.parent()).unwrap().join("libsadic_ffi.a");
    if !lib.exists() || Command::new("cc").arg("--version").output().is_err() {
        eprintln!("static library or C compiler unavailable; skipped");
        return;
    }
    let dir = env!("CARGO_MANIFEST_DIR");
    let bin = std::env::temp_dir().join(format!("sadic-smoke-{}", std::process::id()));
    let status = Command::new("cc")
        .args(["-I", &format!("{dir}/include"), &format!("{dir}/examples/smoke.c")])
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["status"], "coincident-at");
    let _ = std::fs::remove_file(bin);
}
