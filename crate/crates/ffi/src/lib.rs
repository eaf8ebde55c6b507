//! C ABI for the zxroute compiler.
//!
//! Circuits, hardware models and results are opaque handles released with
//! the matching `zxr_*_free`. Every fallible call returns a
//! [`ZxrStatus`]; on failure [`zxr_last_error`] describes the problem.
//! Strings returned by the library must be released with [`zxr_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use zxroute::alternator::{compare_to_baseline, AlternatorConfig, Comparison};
use zxroute::bench::prepare;
use zxroute::qasm::{parse_qasm, write_qasm};
use zxroute::route::{grid_model, parse_hardware_config, HardwareModel, HardwareParams};
use zxroute::Circuit;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZxrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Compile = 5,
    Panic = 6,
}

/// A logical circuit.
pub struct ZxrCircuit(Circuit);

/// A coupling graph with noise parameters.
pub struct ZxrHardware(HardwareModel);

/// Baseline and alternating compilation of one circuit.
pub struct ZxrResult(Comparison);

/// Alternating-extraction parameters. A `window` of 0 means unbounded.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct ZxrOptions {
    pub beta: f64,
    pub window: usize,
    pub depth: usize,
    pub max_branch: usize,
    pub seed: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("NULs were removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), (ZxrStatus, String)>) -> ZxrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            ZxrStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ZxrStatus::Panic
        }
    }
}

fn null() -> (ZxrStatus, String) {
    (ZxrStatus::NullPointer, "null pointer argument".into())
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, (ZxrStatus, String)> {
    if s.is_null() {
        return Err(null());
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| (ZxrStatus::InvalidUtf8, e.to_string()))
}

unsafe fn out_arg<T>(out: *mut *mut T, value: T) -> Result<(), (ZxrStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn zxr_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn zxr_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses OpenQASM 2.0 text.
///
/// # Safety
/// `qasm` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zxr_circuit_from_qasm(qasm: *const c_char, out: *mut *mut ZxrCircuit) -> ZxrStatus {
    guard(|| {
        let text = str_arg(qasm)?;
        let c = parse_qasm(text).map_err(|e| (ZxrStatus::Parse, e.to_string()))?;
        out_arg(out, ZxrCircuit(c))
    })
}

/// Number of qubits, or 0 for null.
///
/// # Safety
/// `c` must be null or a live circuit handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_circuit_num_qubits(c: *const ZxrCircuit) -> usize {
    c.as_ref().map_or(0, |c| c.0.num_qubits())
}

/// # Safety
/// `c` must be null or a live circuit handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_circuit_free(c: *mut ZxrCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// A `rows`×`cols` grid with default noise parameters.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zxr_hardware_grid(rows: usize, cols: usize, out: *mut *mut ZxrHardware) -> ZxrStatus {
    guard(|| {
        let hw = grid_model(rows, cols, HardwareParams::default()).map_err(|e| (ZxrStatus::InvalidArgument, e.to_string()))?;
        out_arg(out, ZxrHardware(hw))
    })
}

/// Parses a `key = value` hardware description.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zxr_hardware_from_config(config: *const c_char, out: *mut *mut ZxrHardware) -> ZxrStatus {
    guard(|| {
        let text = str_arg(config)?;
        let hw = parse_hardware_config(text).map_err(|e| (ZxrStatus::Parse, e.to_string()))?;
        out_arg(out, ZxrHardware(hw))
    })
}

/// Number of physical qubits, or 0 for null.
///
/// # Safety
/// `hw` must be null or a live hardware handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_hardware_num_qubits(hw: *const ZxrHardware) -> usize {
    hw.as_ref().map_or(0, |h| h.0.num_physical())
}

/// # Safety
/// `hw` must be null or a live hardware handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_hardware_free(hw: *mut ZxrHardware) {
    if !hw.is_null() {
        drop(Box::from_raw(hw));
    }
}

/// Default options: β=0, unbounded window, depth 1, 8 branches, seed 0.
#[no_mangle]
pub extern "C" fn zxr_options_default() -> ZxrOptions {
    let d = AlternatorConfig::default();
    ZxrOptions {
        beta: d.beta,
        window: d.window.unwrap_or(0),
        depth: d.depth,
        max_branch: d.max_branch,
        seed: d.seed,
    }
}

/// Simplifies `c` and compiles it for `hw` with both the baseline and the
/// alternating pipeline.
///
/// # Safety
/// `c` and `hw` must be live handles, `opts` null (defaults) or valid, and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zxr_compile(
    c: *const ZxrCircuit,
    hw: *const ZxrHardware,
    opts: *const ZxrOptions,
    out: *mut *mut ZxrResult,
) -> ZxrStatus {
    guard(|| {
        let (c, hw) = match (c.as_ref(), hw.as_ref()) {
            (Some(c), Some(hw)) => (&c.0, &hw.0),
            _ => return Err(null()),
        };
        let opts = opts.as_ref().copied().unwrap_or_else(|| zxr_options_default());
        let cfg = AlternatorConfig {
            beta: opts.beta,
            window: (opts.window > 0).then_some(opts.window),
            depth: opts.depth,
            max_branch: opts.max_branch,
            seed: opts.seed,
            ..AlternatorConfig::default()
        };
        cfg.validate().map_err(|e| (ZxrStatus::InvalidArgument, e.to_string()))?;
        let g = prepare(c).map_err(|e| (ZxrStatus::Compile, e.to_string()))?;
        let cmp = compare_to_baseline(&g, hw, &cfg).map_err(|e| (ZxrStatus::Compile, e.to_string()))?;
        out_arg(out, ZxrResult(cmp))
    })
}

/// Success probability of the alternating result, or NaN for null.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_asp(r: *const ZxrResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.asp_alt)
}

/// Success probability of the baseline, or NaN for null.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_asp_baseline(r: *const ZxrResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.asp_base)
}

/// Relative fidelity gain over the baseline, or NaN for null.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_delta_fidelity(r: *const ZxrResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.delta_fidelity)
}

/// SWAPs inserted in the alternating result.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_swap_count(r: *const ZxrResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.alternating.swap_count)
}

/// CX and CZ gates in the alternating result, SWAPs excluded.
///
/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_two_qubit_count(r: *const ZxrResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.alternating.two_qubit_count)
}

/// The routed alternating circuit as OpenQASM 2.0 over the physical
/// qubits. Release with [`zxr_string_free`].
///
/// # Safety
/// `r` must be a live result handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_qasm(r: *const ZxrResult, out: *mut *mut c_char) -> ZxrStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let text = CString::new(write_qasm(&r.0.alternating.circuit)).expect("QASM has no NUL bytes");
        *out = text.into_raw();
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn zxr_result_free(r: *mut ZxrResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[cfg(test)]
mod tests {
    use std::ptr;

    use super::*;

    #[test]
    fn errors_are_reported_per_call() {
        let mut c = ptr::null_mut();
        let text = CString::new("OPENQASM 2.0;\nqreg q[2];\nfoo q[0];\n").unwrap();
        let status = unsafe { zxr_circuit_from_qasm(text.as_ptr(), &mut c) };
        assert_eq!(status, ZxrStatus::Parse);
        assert!(c.is_null());
        let msg = unsafe { CStr::from_ptr(zxr_last_error()) };
        assert!(!msg.to_bytes().is_empty());
        assert_eq!(unsafe { zxr_circuit_from_qasm(ptr::null(), &mut c) }, ZxrStatus::NullPointer);
        let mut hw = ptr::null_mut();
        assert_eq!(unsafe { zxr_hardware_grid(2, 2, &mut hw) }, ZxrStatus::Ok);
        assert!(unsafe { CStr::from_ptr(zxr_last_error()) }.to_bytes().is_empty());
        unsafe { zxr_hardware_free(hw) };
    }
}
