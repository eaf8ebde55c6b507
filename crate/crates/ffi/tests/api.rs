use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use zxroute_ffi::*;

const BELL_T: &str = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\nh q[0];\ncx q[0],q[2];\nt q[2];\ncx q[2],q[1];\n";

fn last_error() -> String {
    unsafe { CStr::from_ptr(zxr_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn compile_round_trip() {
    let src = CString::new(BELL_T).unwrap();
    let (mut c, mut hw, mut r) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(zxr_circuit_from_qasm(src.as_ptr(), &mut c), ZxrStatus::Ok);
        assert_eq!(zxr_circuit_num_qubits(c), 3);
        assert_eq!(zxr_hardware_grid(1, 3, &mut hw), ZxrStatus::Ok);
        assert_eq!(zxr_hardware_num_qubits(hw), 3);
        assert_eq!(zxr_compile(c, hw, ptr::null(), &mut r), ZxrStatus::Ok);
        let (alt, base) = (zxr_result_asp(r), zxr_result_asp_baseline(r));
        assert!(alt > 0.0 && alt <= 1.0);
        assert!((zxr_result_delta_fidelity(r) - (alt - base) / base).abs() < 1e-12);
        assert!(zxr_result_two_qubit_count(r) >= 2);
        let mut text = ptr::null_mut();
        assert_eq!(zxr_result_qasm(r, &mut text), ZxrStatus::Ok);
        let q = CStr::from_ptr(text).to_str().unwrap().to_owned();
        zxr_string_free(text);
        assert!(q.starts_with("OPENQASM 2.0;"));
        zxr_result_free(r);
        zxr_hardware_free(hw);
        zxr_circuit_free(c);
    }
}

#[test]
fn invalid_arguments_set_status_and_message() {
    let src = CString::new(BELL_T).unwrap();
    let (mut c, mut hw, mut r) = (ptr::null_mut(), ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(zxr_hardware_grid(0, 3, &mut hw), ZxrStatus::InvalidArgument);
        assert!(hw.is_null());
        assert!(!last_error().is_empty());
        let bad = CString::new("rows = x").unwrap();
        assert_eq!(zxr_hardware_from_config(bad.as_ptr(), &mut hw), ZxrStatus::Parse);
        let cfg = CString::new("rows = 1\ncols = 2\n").unwrap();
        assert_eq!(zxr_hardware_from_config(cfg.as_ptr(), &mut hw), ZxrStatus::Ok);
        assert_eq!(zxr_circuit_from_qasm(src.as_ptr(), &mut c), ZxrStatus::Ok);
        assert_eq!(zxr_compile(c, hw, ptr::null(), &mut r), ZxrStatus::Compile);
        assert!(r.is_null());
        assert!(last_error().contains("qubits"), "{}", last_error());
        let opts = ZxrOptions {
            max_branch: 0,
            ..zxr_options_default()
        };
        assert_eq!(zxr_compile(c, hw, &opts, &mut r), ZxrStatus::InvalidArgument);
        assert_eq!(zxr_compile(ptr::null(), hw, ptr::null(), &mut r), ZxrStatus::NullPointer);
        let invalid = [0xffu8, 0];
        assert_eq!(zxr_circuit_from_qasm(invalid.as_ptr().cast(), &mut c), ZxrStatus::InvalidUtf8);
        assert!(zxr_result_asp(ptr::null()).is_nan());
        zxr_result_free(ptr::null_mut());
        zxr_string_free(ptr::null_mut());
        zxr_hardware_free(hw);
        zxr_circuit_free(c);
    }
}

#[test]
fn header_declares_the_api() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/zxroute.h")).unwrap();
    for name in ["zxr_circuit_from_qasm", "zxr_compile", "zxr_result_qasm", "zxr_last_error", "zxr_string_free", "ZXR_STATUS_PANIC"] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_the_static_library() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let profile = target.parent().unwrap().join(if cfg!(debug_assertions) { "debug" } else { "release" });
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("skipping: no C compiler");
        return;
    }
    let mut build = Command::new(env!("CARGO"));
    build.args(["build", "-p", "zxroute-ffi", "--lib"]);
    if !cfg!(debug_assertions) {
        build.arg("--release");
    }
    assert!(build.status().unwrap().success());
    let lib = profile.join("libzxroute_ffi.a");
    let exe = target.join("zxroute_c_api");
    let status = Command::new("cc")
        .arg(dir.join("tests/c_api.c"))
        .arg("-I")
        .arg(dir.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("asp="));
}
