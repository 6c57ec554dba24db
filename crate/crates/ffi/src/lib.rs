//! C ABI over `m24-core`. Results come back as NUL-terminated JSON strings owned by the
//! caller and released with [`m24_string_free`]; failures set a status code and a message
//! readable through [`m24_last_error`].

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use m24_core::cli::{
    coeff_table, decomposition_report, render_coeffs, render_decomposition, resolve_classes, CliError, CoeffKind,
    CoeffOrders, ModuleKind, OutputFormat,
};
use m24_core::group::load_group_data;
use m24_core::verify::{run_suite, Suite, VerifyOptions};

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum M24Status {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Unknown kind, module, suite or class, or an out-of-range order.
    Usage = 3,
    /// The group data failed to load or validate.
    Data = 4,
    /// The computation failed, or a verification record failed.
    Failed = 5,
    /// The library panicked; the context is still usable.
    Panic = 6,
}

/// Opaque per-caller state: the last error message.
pub struct M24Context {
    last_error: CString,
}

impl M24Context {
    fn set_error(&mut self, msg: impl std::fmt::Display) {
        let text = msg.to_string().replace('\0', " ");
        self.last_error = CString::new(text).expect("NUL bytes removed");
    }
}

/// A new context, or null if the group data cannot be loaded.
#[no_mangle]
pub extern "C" fn m24_context_new() -> *mut M24Context {
    match catch_unwind(load_group_data) {
        Ok(Ok(_)) => Box::into_raw(Box::new(M24Context { last_error: CString::default() })),
        _ => ptr::null_mut(),
    }
}

/// Releases a context from [`m24_context_new`]. Null is ignored.
///
/// # Safety
/// `ctx` must be null or a live context, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn m24_context_free(ctx: *mut M24Context) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// The message of the last failed call on `ctx`, empty if none. Valid until the next
/// call on `ctx`.
///
/// # Safety
/// `ctx` must be null or a live context.
#[no_mangle]
pub unsafe extern "C" fn m24_last_error(ctx: *const M24Context) -> *const c_char {
    match ctx.as_ref() {
        Some(c) => c.last_error.as_ptr(),
        None => c"".as_ptr(),
    }
}

/// Releases a string returned through an `out` argument. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn m24_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The library version.
#[no_mangle]
pub extern "C" fn m24_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version has no NUL"),
    };
    VERSION.as_ptr()
}

struct Failure(M24Status, String);

fn usage(msg: impl Into<String>) -> Failure {
    Failure(M24Status::Usage, msg.into())
}

impl From<CliError> for Failure {
    fn from(e: CliError) -> Self {
        let status = match e {
            CliError::Usage(_) => M24Status::Usage,
            CliError::Group(_) => M24Status::Data,
            _ => M24Status::Failed,
        };
        Failure(status, e.to_string())
    }
}

unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(M24Status::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(M24Status::InvalidUtf8, format!("{name} is not UTF-8")))
}

/// Runs `body`, storing its string in `*out` on success and the message in `ctx` otherwise.
unsafe fn run(
    ctx: *mut M24Context,
    out: *mut *mut c_char,
    body: impl FnOnce() -> Result<String, Failure>,
) -> M24Status {
    let Some(ctx) = ctx.as_mut() else { return M24Status::NullArgument };
    if out.is_null() {
        ctx.set_error("out is null");
        return M24Status::NullArgument;
    }
    *out = ptr::null_mut();
    let result = catch_unwind(AssertUnwindSafe(body));
    let (status, text) = match result {
        Ok(Ok(s)) => (M24Status::Ok, s),
        Ok(Err(Failure(st, msg))) => (st, msg),
        Err(_) => (M24Status::Panic, "internal panic".to_string()),
    };
    if status == M24Status::Ok {
        ctx.last_error = CString::default();
        *out = CString::new(text.replace('\0', " ")).expect("NUL bytes removed").into_raw();
    } else {
        ctx.set_error(text);
    }
    status
}

/// Coefficient tables as JSON lines, one object `{kind, class, orders, rows}` per class.
///
/// `kind` is `eta-inverse`, `H`, `Z-disc` or `siegel`; `classes` is a series label, a
/// comma-separated list or `all`. `order` is the row count, or the largest discriminant
/// for `Z-disc`; `p_max`, `q_max` bound the Siegel window.
///
/// # Safety
/// `ctx` must be a live context, the strings NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn m24_coeffs_json(
    ctx: *mut M24Context,
    kind: *const c_char,
    classes: *const c_char,
    order: i64,
    p_max: i64,
    q_max: i64,
    out: *mut *mut c_char,
) -> M24Status {
    run(ctx, out, || {
        let kind: CoeffKind = arg(kind, "kind")?.parse().map_err(usage)?;
        let labels = resolve_classes(arg(classes, "classes")?)?;
        let orders = CoeffOrders { order, p_max, q_max, y_window: None };
        let tables = labels.iter().map(|l| coeff_table(kind, l, orders)).collect::<Result<Vec<_>, _>>()?;
        Ok(render_coeffs(&tables, OutputFormat::Json))
    })
}

/// A decomposition report as one JSON object. `module` is `eta-Fock`, `K` or `Khat`.
/// Returns [`M24Status::Failed`] with the report still written to `*out` when some
/// multiplicity could not come from an actual module.
///
/// # Safety
/// As for [`m24_coeffs_json`].
#[no_mangle]
pub unsafe extern "C" fn m24_decompose_json(
    ctx: *mut M24Context,
    module: *const c_char,
    depth: i64,
    out: *mut *mut c_char,
) -> M24Status {
    let mut violations = Vec::new();
    let status = run(ctx, out, || {
        let module: ModuleKind = arg(module, "module")?.parse().map_err(usage)?;
        let report = decomposition_report(module, depth)?;
        violations.clone_from(&report.violations);
        Ok(render_decomposition(&report, OutputFormat::Json))
    });
    if status == M24Status::Ok && !violations.is_empty() {
        (*ctx).set_error(violations.join("; "));
        return M24Status::Failed;
    }
    status
}

/// Runs a verification suite (`tables`, `identities`, `transforms`, `rademacher`, `all`)
/// on the selected classes with default depths, writing JSON lines to `*out` and the
/// number of failed records to `*failed`. Returns [`M24Status::Failed`] if any failed.
///
/// # Safety
/// As for [`m24_coeffs_json`]; `failed` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn m24_verify_json(
    ctx: *mut M24Context,
    suite: *const c_char,
    classes: *const c_char,
    out: *mut *mut c_char,
    failed: *mut usize,
) -> M24Status {
    let mut count = 0;
    let status = run(ctx, out, || {
        let suite: Suite = arg(suite, "suite")?.parse().map_err(usage)?;
        let opts = VerifyOptions { classes: resolve_classes(arg(classes, "classes")?)?, ..VerifyOptions::default() };
        let mut text = String::new();
        let records = run_suite(suite, &opts, |r| {
            text.push_str(&r.to_json_line());
            text.push('\n');
        });
        count = records.iter().filter(|r| !r.passed()).count();
        Ok(text)
    });
    if !failed.is_null() {
        *failed = count;
    }
    if status == M24Status::Ok && count > 0 {
        (*ctx).set_error(format!("{count} records failed"));
        return M24Status::Failed;
    }
    status
}
