//! C ABI over `effect_factor`.
//!
//! Handles are opaque pointers released with their `_free` function.
//! Every call returns an [`EfStatus`]; on anything but `EF_STATUS_OK` the
//! message is available from [`ef_last_error`] until the next failing call on
//! the same thread. Strings returned through out-parameters are owned by the
//! caller and released with [`ef_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use effect_factor::cli::{emit_report, parse_config, run, Format, Subcommand};
use effect_factor::finset::DEFAULT_MAX_CARRIER;
use effect_factor::presets::preset;
use effect_factor::signature::{check_lemma2_stabilization, verify_theorem1, CheckOptions, FactoredMonad, Limits};
use effect_factor::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EfStatus {
    Ok = 0,
    /// The call completed and at least one check failed.
    CheckFailed = 1,
    InvalidConfig = 2,
    InstanceTooLarge = 3,
    NullPointer = 4,
    InvalidArgument = 5,
    /// A bug: the library panicked.
    Internal = 6,
}

/// A monad factored through the image of its free monad on a signature.
pub struct EfFactored {
    inner: FactoredMonad,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> EfStatus {
    match e {
        Error::InstanceTooLarge { .. } => EfStatus::InstanceTooLarge,
        Error::Config(_) | Error::Unknown { .. } => EfStatus::InvalidConfig,
        Error::TheoremViolation(_) => EfStatus::CheckFailed,
        _ => EfStatus::InvalidArgument,
    }
}

fn fail(e: Error) -> EfStatus {
    set_error(e.to_string());
    status_of(&e)
}

fn guard(f: impl FnOnce() -> EfStatus) -> EfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal error: panic inside effect_factor");
            EfStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, EfStatus> {
    if p.is_null() {
        set_error(format!("{what} is null"));
        return Err(EfStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not UTF-8"));
        EfStatus::InvalidArgument
    })
}

macro_rules! handle {
    ($p:expr) => {
        match $p.as_mut() {
            Some(h) => h,
            None => {
                set_error("handle is null");
                return EfStatus::NullPointer;
            }
        }
    };
}

macro_rules! out {
    ($p:expr) => {
        if $p.is_null() {
            set_error("output pointer is null");
            return EfStatus::NullPointer;
        }
    };
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(e) => return fail(e),
        }
    };
}

/// Copies `data` into `buf` when it fits in `cap`; always stores the length.
unsafe fn copy_out(data: &[usize], buf: *mut usize, cap: usize, len: *mut usize) -> EfStatus {
    *len = data.len();
    if data.len() > cap {
        set_error(format!("buffer holds {cap}, need {}", data.len()));
        return EfStatus::InvalidArgument;
    }
    if !data.is_empty() {
        if buf.is_null() {
            set_error("buffer is null");
            return EfStatus::NullPointer;
        }
        ptr::copy_nonoverlapping(data.as_ptr(), buf, data.len());
    }
    EfStatus::Ok
}

/// Last error message on this thread, or an empty string. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ef_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ef_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a handle for a built-in preset with `|S|` or `|A|` equal to `param`.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_from_preset(name: *const c_char, param: usize, out: *mut *mut EfFactored) -> EfStatus {
    guard(|| {
        out!(out);
        let name = match str_arg(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let interp = tri!(preset(name, param, DEFAULT_MAX_CARRIER));
        let h = Box::new(EfFactored {
            inner: FactoredMonad::new(interp, Limits::default()),
        });
        *out = Box::into_raw(h);
        EfStatus::Ok
    })
}

/// Builds a handle from the monad, operations and limits of a TOML run
/// configuration.
///
/// # Safety
/// `config` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_from_config(config: *const c_char, out: *mut *mut EfFactored) -> EfStatus {
    guard(|| {
        out!(out);
        let text = match str_arg(config, "config") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let config = tri!(parse_config(text));
        let interp = tri!(config.interpretation());
        *out = Box::into_raw(Box::new(EfFactored {
            inner: FactoredMonad::new(interp, config.limits()),
        }));
        EfStatus::Ok
    })
}

/// # Safety
/// `h` must come from an `ef_factored_from_*` call and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_free(h: *mut EfFactored) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Saturates `R X` for `|X| = x` and stores `|R X|`.
///
/// # Safety
/// `h` must be a live handle and `size` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_saturate(h: *mut EfFactored, x: usize, size: *mut usize) -> EfStatus {
    guard(|| {
        let h = handle!(h);
        out!(size);
        *size = tri!(h.inner.saturate(x)).len();
        EfStatus::Ok
    })
}

/// Stores `|T X|`.
///
/// # Safety
/// `h` must be a live handle and `size` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_carrier_size(h: *mut EfFactored, x: usize, size: *mut usize) -> EfStatus {
    guard(|| {
        let h = handle!(h);
        out!(size);
        *size = tri!(h.inner.saturate(x)).carrier_size();
        EfStatus::Ok
    })
}

/// Copies the table of `n_X : R X → T X` into `buf`. `len` receives the
/// table length even when `cap` is too small.
///
/// # Safety
/// `h` must be a live handle, `len` a valid pointer and `buf` valid for
/// `cap` elements.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_n_table(
    h: *mut EfFactored,
    x: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> EfStatus {
    guard(|| {
        let h = handle!(h);
        out!(len);
        let entry = tri!(h.inner.saturate(x));
        copy_out(entry.elements(), buf, cap, len)
    })
}

/// Copies the saturation layer trace at `X`, as for [`ef_factored_n_table`].
///
/// # Safety
/// As for [`ef_factored_n_table`].
#[no_mangle]
pub unsafe extern "C" fn ef_factored_layer_trace(
    h: *mut EfFactored,
    x: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> EfStatus {
    guard(|| {
        let h = handle!(h);
        out!(len);
        let entry = tri!(h.inner.saturate(x));
        copy_out(entry.layer_trace(), buf, cap, len)
    })
}

/// Runs the factored-monad checks at objects `(x, y, z)` and the
/// stabilization check at `x`. `failures` receives the number of failed
/// checks; the status is `EF_STATUS_CHECK_FAILED` when it is nonzero.
///
/// # Safety
/// `h` must be a live handle and `failures` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_factored_verify(
    h: *mut EfFactored,
    x: usize,
    y: usize,
    z: usize,
    budget: u64,
    seed: u64,
    failures: *mut usize,
) -> EfStatus {
    guard(|| {
        let h = handle!(h);
        out!(failures);
        let opts = CheckOptions {
            budget,
            seed,
            ..CheckOptions::default()
        };
        let report = tri!(verify_theorem1(&mut h.inner, x, y, z, &opts));
        let lemma = tri!(check_lemma2_stabilization(&h.inner, x));
        let mut n = report.failures().count();
        if !lemma.passed() {
            n += 1;
        }
        *failures = n;
        if n == 0 {
            EfStatus::Ok
        } else {
            set_error(match report.failures().next() {
                Some(c) => format!("{} {:?}: {}", c.name, c.objects, c.detail.as_deref().unwrap_or("")),
                None => format!("stabilization at {x}: {}", lemma.detail.unwrap_or_default()),
            });
            EfStatus::CheckFailed
        }
    })
}

/// Runs a subcommand (`factor`, `laws`, `theory`, `stability`, `modularity`,
/// `presets`) on a TOML configuration, which may be null for `presets`. The
/// rendered report (`machine` nonzero for TOML) is stored in `report` for
/// both `EF_STATUS_OK` and `EF_STATUS_CHECK_FAILED`.
///
/// # Safety
/// String arguments must be NUL-terminated; `report` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ef_run_config(
    subcommand: *const c_char,
    config: *const c_char,
    machine: i32,
    report: *mut *mut c_char,
) -> EfStatus {
    guard(|| {
        out!(report);
        *report = ptr::null_mut();
        let sub = match str_arg(subcommand, "subcommand") {
            Ok(s) => s,
            Err(s) => return s,
        };
        let sub: Subcommand = tri!(sub.parse());
        let config = if config.is_null() {
            None
        } else {
            match str_arg(config, "config") {
                Ok(text) => Some(tri!(parse_config(text))),
                Err(s) => return s,
            }
        };
        let r = tri!(run(sub, config.as_ref()));
        let format = if machine != 0 { Format::Machine } else { Format::Human };
        let text = tri!(emit_report(&r, format));
        *report = CString::new(text).unwrap_or_default().into_raw();
        if r.passed {
            EfStatus::Ok
        } else {
            set_error(format!("{} check(s) failed", r.failures().count()));
            EfStatus::CheckFailed
        }
    })
}

/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn ef_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
