//! C ABI for the tcds engine.
//!
//! The interface follows three conventions:
//!
//! * Systems live behind the opaque handle [`TcdsSystem`]. A handle is
//!   created from JSON, is immutable, and must be released with
//!   [`tcds_system_free`].
//! * Every fallible call returns a status code: [`TCDS_OK`] when all
//!   checks ran and passed, [`TCDS_FAIL`] when checks ran and at least
//!   one failed (a report or witness string is still produced), and
//!   [`TCDS_INVALID`] when the input could not be used at all.
//! * Strings cross the boundary as NUL-terminated UTF-8. Strings
//!   returned through `char **` out-parameters are heap-allocated and
//!   must be released with [`tcds_string_free`]; `tcds_version` returns
//!   a static string that must not be freed.
//!
//! Every entry point catches panics, so the engine never unwinds across
//! the C boundary; a panic surfaces as [`TCDS_INVALID`] with a message.

use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use tcds::config::{RunConfig, SystemConfig};
use tcds::report::Report;
use tcds::system::axiom_witnesses;
use tcds::TwistedSystem;

/// All requested checks ran and passed.
pub const TCDS_OK: i32 = 0;

/// Checks ran and at least one failed; diagnostics were produced.
pub const TCDS_FAIL: i32 = 1;

/// The input was unusable: bad pointer, bad JSON, or an unknown name.
pub const TCDS_INVALID: i32 = 2;

/// An immutable twisted system together with its JSON description.
pub struct TcdsSystem {
    config: SystemConfig,
    system: Arc<TwistedSystem>,
}

fn panic_message(payload: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        (*s).to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "unknown panic".to_string()
    }
}

/// Write `s` through a nullable `char **` out-parameter.
fn set_out_string(out: *mut *mut c_char, s: &str) {
    if out.is_null() {
        return;
    }
    let cleaned = s.replace('\0', " ");
    let c = CString::new(cleaned).expect("interior NULs were removed");
    unsafe { *out = c.into_raw() };
}

fn clear_out_string(out: *mut *mut c_char) {
    if !out.is_null() {
        unsafe { *out = std::ptr::null_mut() };
    }
}

/// Run `body` with panics converted to `TCDS_INVALID` plus a message.
fn guarded(out_error: *mut *mut c_char, body: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(payload) => {
            set_out_string(out_error, &format!("internal error: {}", panic_message(payload)));
            TCDS_INVALID
        }
    }
}

/// Borrow a required UTF-8 argument, reporting failures through `out_error`.
unsafe fn required_str<'a>(
    ptr: *const c_char,
    what: &str,
    out_error: *mut *mut c_char,
) -> Option<&'a str> {
    if ptr.is_null() {
        set_out_string(out_error, &format!("{what} is a null pointer"));
        return None;
    }
    match CStr::from_ptr(ptr).to_str() {
        Ok(s) => Some(s),
        Err(_) => {
            set_out_string(out_error, &format!("{what} is not valid UTF-8"));
            None
        }
    }
}

unsafe fn required_system<'a>(
    system: *const TcdsSystem,
    out_error: *mut *mut c_char,
) -> Option<&'a TcdsSystem> {
    if system.is_null() {
        set_out_string(out_error, "system is a null pointer");
        None
    } else {
        Some(&*system)
    }
}

fn parse_system_config(json: &str) -> Result<SystemConfig, String> {
    // A full run config is accepted as well, so the same files drive
    // the CLI and the C interface; only its system part is kept.
    if let Ok(cfg) = RunConfig::from_json(json) {
        return Ok(cfg.system);
    }
    serde_json::from_str::<SystemConfig>(json).map_err(|e| {
        format!("JSON parses neither as a run config nor as a system description: {e}")
    })
}

fn run_with(
    handle: &TcdsSystem,
    command: &str,
    tasks: Vec<String>,
    seed: u64,
    tolerance: f64,
    samples: usize,
) -> Result<Report, String> {
    let mut cfg = RunConfig::for_system(handle.config.clone());
    cfg.tasks = tasks;
    cfg.seed = seed;
    cfg.tolerance = tolerance;
    cfg.samples = samples;
    tcds::runner::run(command, &cfg).map_err(|e| e.to_string())
}

/// Version of the engine as a static NUL-terminated string. Never freed.
#[no_mangle]
pub extern "C" fn tcds_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Build a system from JSON: either a system description (builtin
/// reference or explicit data) or a full run config whose system part
/// is used. On success writes a handle and returns `TCDS_OK`. If the
/// JSON parses but the description violates the twisted-system axioms,
/// returns `TCDS_FAIL` and writes the witness list to `out_error`.
/// Unusable JSON returns `TCDS_INVALID`.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_new_from_json(
    json: *const c_char,
    out_system: *mut *mut TcdsSystem,
    out_error: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_error);
    if out_system.is_null() {
        set_out_string(out_error, "out_system is null");
        return TCDS_INVALID;
    }
    *out_system = std::ptr::null_mut();
    guarded(out_error, || {
        let Some(text) = required_str(json, "json", out_error) else {
            return TCDS_INVALID;
        };
        let config = match parse_system_config(text) {
            Ok(c) => c,
            Err(e) => {
                set_out_string(out_error, &e);
                return TCDS_INVALID;
            }
        };
        let parts = match config.build_parts() {
            Ok(p) => p,
            Err(e) => {
                set_out_string(out_error, &e.to_string());
                return TCDS_INVALID;
            }
        };
        let witnesses =
            axiom_witnesses(&parts.algebra, &parts.group, &parts.alpha, &parts.sigma);
        match parts.build() {
            Ok(system) => {
                let handle = Box::new(TcdsSystem { config, system });
                *out_system = Box::into_raw(handle);
                TCDS_OK
            }
            Err(e) => {
                let mut lines = vec![e.to_string()];
                lines.extend(witnesses);
                set_out_string(out_error, &lines.join("\n"));
                TCDS_FAIL
            }
        }
    })
}

/// Release a handle produced by `tcds_system_new_from_json`. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_free(system: *mut TcdsSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Name of the system. The caller frees the string.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_name(
    system: *const TcdsSystem,
    out_name: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_name);
    guarded(std::ptr::null_mut(), || {
        let Some(handle) = required_system(system, std::ptr::null_mut()) else {
            return TCDS_INVALID;
        };
        if out_name.is_null() {
            return TCDS_INVALID;
        }
        set_out_string(out_name, handle.system.name());
        TCDS_OK
    })
}

/// Order of the acting group, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_group_order(system: *const TcdsSystem) -> u64 {
    if system.is_null() {
        return 0;
    }
    (*system).system.group().order() as u64
}

/// Complex dimension of the coefficient algebra, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_algebra_dim(system: *const TcdsSystem) -> u64 {
    if system.is_null() {
        return 0;
    }
    (*system).system.algebra().dim() as u64
}

/// Self-contained JSON description of the system, suitable for feeding
/// back to `tcds_system_new_from_json`. The caller frees the string.
#[no_mangle]
pub unsafe extern "C" fn tcds_system_describe_json(
    system: *const TcdsSystem,
    out_json: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_json);
    guarded(std::ptr::null_mut(), || {
        let Some(handle) = required_system(system, std::ptr::null_mut()) else {
            return TCDS_INVALID;
        };
        if out_json.is_null() {
            return TCDS_INVALID;
        }
        let described = SystemConfig::describe(&handle.system);
        let text = serde_json::to_string_pretty(&described).expect("config serializes");
        set_out_string(out_json, &text);
        TCDS_OK
    })
}

/// JSON array of the built-in gallery names. The caller frees the string.
#[no_mangle]
pub unsafe extern "C" fn tcds_builtin_names(out_json: *mut *mut c_char) -> i32 {
    clear_out_string(out_json);
    guarded(std::ptr::null_mut(), || {
        if out_json.is_null() {
            return TCDS_INVALID;
        }
        let text = serde_json::to_string(&tcds::builtin::NAMES).expect("names serialize");
        set_out_string(out_json, &text);
        TCDS_OK
    })
}

/// JSON array of the task names understood by `tcds_run_task`.
/// The caller frees the string.
#[no_mangle]
pub unsafe extern "C" fn tcds_task_names(out_json: *mut *mut c_char) -> i32 {
    clear_out_string(out_json);
    guarded(std::ptr::null_mut(), || {
        if out_json.is_null() {
            return TCDS_INVALID;
        }
        let text = serde_json::to_string(&tcds::runner::TASKS).expect("names serialize");
        set_out_string(out_json, &text);
        TCDS_OK
    })
}

/// Run one named task against the system and write the report JSON.
/// Reports are deterministic for a fixed seed. Returns `TCDS_OK` when
/// every check passed, `TCDS_FAIL` when the report contains failures
/// (the report is still written), and `TCDS_INVALID` for an unknown
/// task or bad pointers.
#[no_mangle]
pub unsafe extern "C" fn tcds_run_task(
    system: *const TcdsSystem,
    task: *const c_char,
    seed: u64,
    tolerance: f64,
    samples: u64,
    out_report_json: *mut *mut c_char,
    out_error: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_report_json);
    clear_out_string(out_error);
    guarded(out_error, || {
        let Some(handle) = required_system(system, out_error) else {
            return TCDS_INVALID;
        };
        let Some(task) = required_str(task, "task", out_error) else {
            return TCDS_INVALID;
        };
        if out_report_json.is_null() {
            set_out_string(out_error, "out_report_json is a null pointer");
            return TCDS_INVALID;
        }
        let tasks = vec![task.to_string()];
        match run_with(handle, task, tasks, seed, tolerance, samples as usize) {
            Ok(report) => {
                set_out_string(out_report_json, &report.to_json());
                if report.exit_code() == 0 {
                    TCDS_OK
                } else {
                    TCDS_FAIL
                }
            }
            Err(e) => {
                set_out_string(out_error, &e);
                TCDS_INVALID
            }
        }
    })
}

/// Run several tasks in one report. `tasks_csv` is a comma-separated
/// list of task names; null or empty means every task. Status codes
/// are as for `tcds_run_task`.
#[no_mangle]
pub unsafe extern "C" fn tcds_run_report(
    system: *const TcdsSystem,
    tasks_csv: *const c_char,
    seed: u64,
    tolerance: f64,
    samples: u64,
    out_report_json: *mut *mut c_char,
    out_error: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_report_json);
    clear_out_string(out_error);
    guarded(out_error, || {
        let Some(handle) = required_system(system, out_error) else {
            return TCDS_INVALID;
        };
        if out_report_json.is_null() {
            set_out_string(out_error, "out_report_json is a null pointer");
            return TCDS_INVALID;
        }
        let tasks: Vec<String> = if tasks_csv.is_null() {
            tcds::runner::TASKS.iter().map(|t| t.to_string()).collect()
        } else {
            let Some(csv) = required_str(tasks_csv, "tasks_csv", out_error) else {
                return TCDS_INVALID;
            };
            let picked: Vec<String> = csv
                .split(',')
                .map(|t| t.trim().to_string())
                .filter(|t| !t.is_empty())
                .collect();
            if picked.is_empty() {
                tcds::runner::TASKS.iter().map(|t| t.to_string()).collect()
            } else {
                picked
            }
        };
        match run_with(handle, "suite", tasks, seed, tolerance, samples as usize) {
            Ok(report) => {
                set_out_string(out_report_json, &report.to_json());
                if report.exit_code() == 0 {
                    TCDS_OK
                } else {
                    TCDS_FAIL
                }
            }
            Err(e) => {
                set_out_string(out_error, &e);
                TCDS_INVALID
            }
        }
    })
}

/// Merge report JSON documents produced by this library or the CLI into
/// one combined report, keyed by system, command, and task. Returns the
/// merged report's own status code.
#[no_mangle]
pub unsafe extern "C" fn tcds_merge_reports(
    reports: *const *const c_char,
    count: usize,
    out_json: *mut *mut c_char,
    out_error: *mut *mut c_char,
) -> i32 {
    clear_out_string(out_json);
    clear_out_string(out_error);
    guarded(out_error, || {
        if out_json.is_null() {
            set_out_string(out_error, "out_json is a null pointer");
            return TCDS_INVALID;
        }
        if reports.is_null() && count > 0 {
            set_out_string(out_error, "reports is a null pointer");
            return TCDS_INVALID;
        }
        let mut parsed = Vec::with_capacity(count);
        for i in 0..count {
            let ptr = *reports.add(i);
            let Some(text) = required_str(ptr, &format!("reports[{i}]"), out_error) else {
                return TCDS_INVALID;
            };
            match Report::from_json(text) {
                Ok(r) => parsed.push(r),
                Err(e) => {
                    set_out_string(out_error, &format!("reports[{i}]: {e}"));
                    return TCDS_INVALID;
                }
            }
        }
        match Report::merge(&parsed) {
            Ok(merged) => {
                set_out_string(out_json, &merged.to_json());
                if merged.exit_code() == 0 {
                    TCDS_OK
                } else {
                    TCDS_FAIL
                }
            }
            Err(e) => {
                set_out_string(out_error, &e.to_string());
                TCDS_INVALID
            }
        }
    })
}

/// Release a string returned by this library. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn tcds_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
