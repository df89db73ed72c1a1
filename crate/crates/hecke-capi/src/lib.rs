//! C ABI for the verification library: an opaque session pins the field
//! and precision parameters, tasks run from CLI-style argument strings,
//! and results come back as JSON strings that the caller frees through
//! this library.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use hecke_core::cli::{self, RunConfig, Task};
use hecke_core::report::all_passed;

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HeckeStatus {
    /// The task ran and every check passed.
    Ok = 0,
    /// The task ran and at least one check failed.
    CheckFailed = 1,
    /// The configuration or an argument was rejected.
    ConfigError = 2,
    /// A null pointer or non-UTF-8 string was passed.
    BadArgument = 3,
}

/// Opaque session: field and precision parameters shared by the tasks
/// run through it.
pub struct HeckeSession {
    n: usize,
    q: u64,
    ell: u64,
    prec: usize,
    window: i64,
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Library version as a static string; never freed.
#[no_mangle]
pub extern "C" fn hecke_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a session. ell = 0 selects rational coefficients. Returns a
/// handle through `out`; call `hecke_session_free` when done.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn hecke_session_new(
    n: usize,
    q: u64,
    ell: u64,
    prec: usize,
    window: i64,
    out: *mut *mut HeckeSession,
) -> HeckeStatus {
    if out.is_null() {
        return HeckeStatus::BadArgument;
    }
    // validate against the least restrictive task so obviously bad
    // parameters are rejected up front
    let probe = RunConfig {
        n,
        q,
        ell,
        prec,
        window,
        task: Task::FiniteHecke {
            demo: "s3-trivial".into(),
        },
        out: None,
    };
    if probe.validate().is_err() {
        unsafe { *out = ptr::null_mut() };
        return HeckeStatus::ConfigError;
    }
    let session = Box::new(HeckeSession {
        n,
        q,
        ell,
        prec,
        window,
    });
    unsafe { *out = Box::into_raw(session) };
    HeckeStatus::Ok
}

/// Frees a session created by `hecke_session_new`. Null is ignored.
///
/// # Safety
/// `session` must be null or a pointer previously returned by
/// `hecke_session_new` that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hecke_session_free(session: *mut HeckeSession) {
    if !session.is_null() {
        drop(unsafe { Box::from_raw(session) });
    }
}

/// Runs one task against the session parameters. `task` is the
/// whitespace-separated CLI form, e.g. "relations 1,7" or
/// "structconst tau1 tau1" or "weyl-identities --n 5". Session
/// parameters apply unless the task string overrides them. On success
/// (`Ok` or `CheckFailed`) `out_json` receives a JSON report that must
/// be released with `hecke_string_free`.
///
/// # Safety
/// `session` must be a live session handle; `task` a NUL-terminated
/// string; `out_json` a valid pointer to writable memory for one
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn hecke_session_run(
    session: *const HeckeSession,
    task: *const c_char,
    out_json: *mut *mut c_char,
) -> HeckeStatus {
    if session.is_null() || task.is_null() || out_json.is_null() {
        return HeckeStatus::BadArgument;
    }
    unsafe { *out_json = ptr::null_mut() };
    let Ok(task_str) = (unsafe { CStr::from_ptr(task) }).to_str() else {
        return HeckeStatus::BadArgument;
    };
    let s = unsafe { &*session };
    let mut args: Vec<String> = task_str.split_whitespace().map(str::to_string).collect();
    // session parameters come first; explicit flags in the task string
    // win because parse_args applies them afterwards
    for (flag, value) in [
        ("--n", s.n.to_string()),
        ("--q", s.q.to_string()),
        ("--ell", s.ell.to_string()),
        ("--prec", s.prec.to_string()),
        ("--window", s.window.to_string()),
    ] {
        if !args.iter().any(|a| a == flag) {
            args.push(flag.to_string());
            args.push(value);
        }
    }
    let rc = match cli::parse_args(&args) {
        Ok(rc) => rc,
        Err(e) => {
            unsafe { *out_json = to_c_string(format!("{{\"error\": {:?}}}", e.to_string())) };
            return HeckeStatus::ConfigError;
        }
    };
    match cli::run(&rc) {
        Ok(report) => {
            let passed = all_passed(&report.checks);
            let json = serde_json_string(&report);
            unsafe { *out_json = to_c_string(json) };
            if passed {
                HeckeStatus::Ok
            } else {
                HeckeStatus::CheckFailed
            }
        }
        Err(e) => {
            unsafe { *out_json = to_c_string(format!("{{\"error\": {:?}}}", e.to_string())) };
            HeckeStatus::ConfigError
        }
    }
}

fn serde_json_string(report: &cli::Report) -> String {
    // report serialization cannot fail: all payloads are plain data
    hecke_core::cli::report_to_json(report)
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string pointer returned by this library that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn hecke_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
