//! C ABI for the fwlcheck verifier.
//!
//! The API is handle-based: build a task from a system document and a
//! property name, configure it with setters, run [`fwl_verify`], and read
//! the verdict through accessors. All handles are opaque; every object
//! created by this library is released by exactly one matching `*_free`
//! call. Functions that can fail return an [`FwlStatus`]; the constructors
//! return null on failure. In both cases a human-readable message is
//! available from [`fwl_last_error`] until the next call on the same
//! thread.
//!
//! # Safety
//!
//! Pointer arguments must be valid for the duration of the call (null is
//! checked and reported, dangling is not). Strings are NUL-terminated
//! UTF-8. Handles must not be used after being freed, and must not be
//! shared across threads without external synchronization. Strings
//! returned as `char*` are owned by the caller and released with
//! [`fwl_string_free`]; strings returned as `const char*` are owned by the
//! library (either static, or valid until the next call / until the handle
//! they came from is freed, as documented per function).

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::str::FromStr;

use fwlcheck::bmc::{
    EngineMode, Property, Verdict, VerdictStatus, VerificationTask, VerifyError,
};
use fwlcheck::counterexample::{CeError, Counterexample};
use fwlcheck::fixedpoint::{FxFormat, OverflowMode, Rounding};
use fwlcheck::realization::{RealizationForm, RealizationSpec};
use fwlcheck::sysmodel::SystemDoc;

/// Result of an API call. `FWL_STATUS_OK` is zero; everything else is an
/// error whose detail is available from `fwl_last_error()`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwlStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The system or counterexample document does not parse or is
    /// semantically invalid.
    BadDocument = 3,
    /// The fixed-point format is invalid.
    BadFormat = 4,
    /// The task is inconsistent: property/system mismatch, missing bound
    /// or error bound, bad realization parameters, bad grid.
    BadTask = 5,
    /// The engine could not decide the task (for example, the exhaustive
    /// search space exceeds the budget, or root finding failed).
    Engine = 6,
    /// The counterexample is structurally sound but cannot be re-executed.
    Replay = 7,
    /// An internal invariant failed; the library state is unharmed but the
    /// call produced nothing.
    Panic = 8,
}

/// Overflow policy of the fixed-point format.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwlOverflowMode {
    Wrap = 0,
    Saturate = 1,
}

/// Rounding policy applied when products are rescaled.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwlRounding {
    Floor = 0,
    NearestEven = 1,
}

/// Search strategy for the bounded properties.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwlEngineMode {
    Exhaustive = 0,
    Random = 1,
}

/// Realization structure simulated by the bounded properties.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwlRealization {
    Dfi = 0,
    Dfii = 1,
    Tdfii = 2,
    Ddfi = 3,
    Ddfii = 4,
    Tddfii = 5,
}

/// Opaque verification task handle. Create with `fwl_task_new`, release
/// with `fwl_task_free`.
pub struct TaskHandle {
    _private: [u8; 0],
}

/// Opaque verdict handle returned by `fwl_verify`. Release with
/// `fwl_verdict_free`.
pub struct VerdictHandle {
    _private: [u8; 0],
}

struct TaskInner {
    task: VerificationTask,
    /// Remembered so format-policy setters can rebuild the format without
    /// losing the stimulus range.
    dyn_range: Option<(f64, f64)>,
}

struct VerdictInner {
    verdict: Verdict,
    property: CString,
    label: CString,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl std::fmt::Display) {
    let text = msg.to_string();
    let c = CString::new(text).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::default());
}

fn status_of(e: &fwlcheck::Error) -> FwlStatus {
    match e {
        fwlcheck::Error::Fx(_) => FwlStatus::BadFormat,
        fwlcheck::Error::Model(_) => FwlStatus::BadDocument,
        fwlcheck::Error::Realization(_) => FwlStatus::BadTask,
        fwlcheck::Error::Analytic(_) => FwlStatus::Engine,
        fwlcheck::Error::Verify(v) => match v {
            VerifyError::BudgetExceeded { .. } | VerifyError::EmptyGrid => FwlStatus::Engine,
            VerifyError::Model(_) => FwlStatus::BadDocument,
            _ => FwlStatus::BadTask,
        },
        fwlcheck::Error::Ce(ce) => match ce {
            CeError::Unreplayable(_) => FwlStatus::Replay,
            _ => FwlStatus::BadDocument,
        },
    }
}

fn fail(status: FwlStatus, msg: impl std::fmt::Display) -> FwlStatus {
    set_error(msg);
    status
}

unsafe fn task_ref<'a>(t: *const TaskHandle) -> Option<&'a TaskInner> {
    (t as *const TaskInner).as_ref()
}

unsafe fn task_mut<'a>(t: *mut TaskHandle) -> Option<&'a mut TaskInner> {
    (t as *mut TaskInner).as_mut()
}

unsafe fn verdict_ref<'a>(v: *const VerdictHandle) -> Option<&'a VerdictInner> {
    (v as *const VerdictInner).as_ref()
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, FwlStatus> {
    if s.is_null() {
        return Err(fail(FwlStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(FwlStatus::InvalidUtf8, "string argument is not UTF-8"))
}

/// Version of the library as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fwl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message describing the most recent failure on this thread. Never null;
/// empty when the last call succeeded. Valid until the next fwlcheck call
/// on the same thread.
#[no_mangle]
pub extern "C" fn fwl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned as `char*` by this library. Null is a no-op.
///
/// # Safety
/// `s` must be a pointer previously returned by an fwlcheck function that
/// documents caller ownership, and must not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn fwl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates a verification task from a system document and a property name.
///
/// `system_json` is the JSON system description; `property` is one of
/// `stability`, `minimum-phase`, `overflow`, `limit-cycle`,
/// `quantization-error`, `closed-stability`, `closed-limit-cycle`,
/// `closed-quantization-error`, `ss-stability`, `ss-controllability`,
/// `ss-observability`, `ss-quantization-error`. `intbits`/`fracbits` give
/// the fixed-point format, which starts with wrap overflow and floor
/// rounding; use the setters to change policies, range, bound, tolerance,
/// realization and engine before calling `fwl_verify`.
///
/// Returns null on failure (see `fwl_last_error`). Release with
/// `fwl_task_free`.
///
/// # Safety
/// `system_json` and `property` must be valid NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_new(
    system_json: *const c_char,
    property: *const c_char,
    intbits: u32,
    fracbits: u32,
) -> *mut TaskHandle {
    clear_error();
    let (json, prop) = match (str_arg(system_json), str_arg(property)) {
        (Ok(j), Ok(p)) => (j, p),
        _ => return std::ptr::null_mut(),
    };
    let prop = match Property::from_str(prop) {
        Ok(p) => p,
        Err(e) => {
            set_error(e);
            return std::ptr::null_mut();
        }
    };
    let doc = match SystemDoc::parse(json) {
        Ok(d) => d,
        Err(e) => {
            set_error(e);
            return std::ptr::null_mut();
        }
    };
    let fmt = match FxFormat::new(intbits, fracbits, OverflowMode::Wrap, Rounding::Floor) {
        Ok(f) => f,
        Err(e) => {
            set_error(e);
            return std::ptr::null_mut();
        }
    };
    let task = VerificationTask::analytic(doc, fmt, prop);
    let inner = TaskInner {
        task,
        dyn_range: None,
    };
    Box::into_raw(Box::new(inner)) as *mut TaskHandle
}

/// Releases a task handle. Null is a no-op.
///
/// # Safety
/// `t` must be a pointer from `fwl_task_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_free(t: *mut TaskHandle) {
    if !t.is_null() {
        drop(Box::from_raw(t as *mut TaskInner));
    }
}

fn rebuild_fmt(
    inner: &mut TaskInner,
    mode: OverflowMode,
    rounding: Rounding,
) -> Result<(), FwlStatus> {
    let old = inner.task.fmt;
    let mut fmt = FxFormat::new(old.int_bits(), old.frac_bits(), mode, rounding)
        .map_err(|e| fail(FwlStatus::BadFormat, e))?;
    if let Some((min, max)) = inner.dyn_range {
        fmt = fmt
            .with_dynamic_range(min, max)
            .map_err(|e| fail(FwlStatus::BadFormat, e))?;
    }
    inner.task.fmt = fmt;
    Ok(())
}

/// Restricts the stimulus dynamic range to `[min, max]` (both representable
/// values are included). Applies to the inputs and searched initial states
/// of the bounded properties.
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_dynamic_range(
    t: *mut TaskHandle,
    min: f64,
    max: f64,
) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    match inner.task.fmt.with_dynamic_range(min, max) {
        Ok(fmt) => {
            inner.task.fmt = fmt;
            inner.dyn_range = Some((min, max));
            FwlStatus::Ok
        }
        Err(e) => fail(FwlStatus::BadFormat, e),
    }
}

/// Sets the overflow policy (default: wrap).
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_overflow_mode(
    t: *mut TaskHandle,
    mode: FwlOverflowMode,
) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    let mode = match mode {
        FwlOverflowMode::Wrap => OverflowMode::Wrap,
        FwlOverflowMode::Saturate => OverflowMode::Saturate,
    };
    let rounding = inner.task.fmt.rounding();
    match rebuild_fmt(inner, mode, rounding) {
        Ok(()) => FwlStatus::Ok,
        Err(s) => s,
    }
}

/// Sets the rounding policy (default: floor).
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_rounding(
    t: *mut TaskHandle,
    rounding: FwlRounding,
) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    let rounding = match rounding {
        FwlRounding::Floor => Rounding::Floor,
        FwlRounding::NearestEven => Rounding::NearestEven,
    };
    let mode = inner.task.fmt.overflow_mode();
    match rebuild_fmt(inner, mode, rounding) {
        Ok(()) => FwlStatus::Ok,
        Err(s) => s,
    }
}

/// Sets the realization structure (default: DFI). `delta` must point to
/// the delta-operator parameter for the delta realizations and must be
/// null for the shift realizations.
///
/// # Safety
/// `t` must be a live task handle; `delta` is either null or a valid
/// pointer for the duration of the call.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_realization(
    t: *mut TaskHandle,
    form: FwlRealization,
    delta: *const f64,
) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    let form = match form {
        FwlRealization::Dfi => RealizationForm::Dfi,
        FwlRealization::Dfii => RealizationForm::Dfii,
        FwlRealization::Tdfii => RealizationForm::Tdfii,
        FwlRealization::Ddfi => RealizationForm::Ddfi,
        FwlRealization::Ddfii => RealizationForm::Ddfii,
        FwlRealization::Tddfii => RealizationForm::Tddfii,
    };
    match RealizationSpec::new(form, delta.as_ref().copied()) {
        Ok(spec) => {
            inner.task.realization = spec;
            FwlStatus::Ok
        }
        Err(e) => fail(FwlStatus::BadTask, e),
    }
}

/// Sets the step bound `k` explored by the bounded properties. Required
/// (nonzero) for them, ignored by the analytic ones.
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_bound(t: *mut TaskHandle, bound: u64) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    match usize::try_from(bound) {
        Ok(b) => {
            inner.task.bound = b;
            FwlStatus::Ok
        }
        Err(_) => fail(FwlStatus::BadTask, "bound does not fit in usize"),
    }
}

/// Sets the output-error tolerance used by the quantization-error
/// properties.
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_error_bound(t: *mut TaskHandle, eps: f64) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    inner.task.error_bound = Some(eps);
    FwlStatus::Ok
}

/// Chooses the search engine (default: exhaustive, which refuses spaces
/// above its budget). `samples` and `seed` configure the random engine and
/// are ignored by the exhaustive one.
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_engine(
    t: *mut TaskHandle,
    mode: FwlEngineMode,
    samples: u64,
    seed: u64,
) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    inner.task.engine.mode = match mode {
        FwlEngineMode::Exhaustive => EngineMode::Exhaustive,
        FwlEngineMode::Random => EngineMode::Random,
    };
    inner.task.engine.samples = samples;
    inner.task.engine.seed = seed;
    FwlStatus::Ok
}

/// Sets the stimulus grid stride in real units (default: every
/// representable value in the dynamic range). Pass a stride of 0 to reset
/// to the default.
///
/// # Safety
/// `t` must be a live task handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_task_set_grid(t: *mut TaskHandle, stride: f64) -> FwlStatus {
    clear_error();
    let Some(inner) = task_mut(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    inner.task.engine.input_grid = if stride == 0.0 { None } else { Some(stride) };
    FwlStatus::Ok
}

/// Runs the task and stores a verdict handle in `*out` on success. The
/// verdict reports whether the property holds and, when it does not,
/// carries the counterexample.
///
/// # Safety
/// `t` must be a live task handle; `out` must be a valid location to store
/// a pointer.
#[no_mangle]
pub unsafe extern "C" fn fwl_verify(
    t: *const TaskHandle,
    out: *mut *mut VerdictHandle,
) -> FwlStatus {
    clear_error();
    if out.is_null() {
        return fail(FwlStatus::NullPointer, "verdict out-pointer is null");
    }
    *out = std::ptr::null_mut();
    let Some(inner) = task_ref(t) else {
        return fail(FwlStatus::NullPointer, "task handle is null");
    };
    let result = catch_unwind(AssertUnwindSafe(|| fwlcheck::verify(&inner.task)));
    match result {
        Ok(Ok(verdict)) => {
            let property = CString::new(verdict.property.to_string()).expect("no NULs");
            let label = CString::new(verdict.stats.label.clone()).expect("no NULs");
            let boxed = Box::new(VerdictInner {
                verdict,
                property,
                label,
            });
            *out = Box::into_raw(boxed) as *mut VerdictHandle;
            FwlStatus::Ok
        }
        Ok(Err(e)) => fail(status_of(&e), e),
        Err(_) => fail(FwlStatus::Panic, "internal panic during verification"),
    }
}

/// Releases a verdict handle. Null is a no-op.
///
/// # Safety
/// `v` must be a pointer from `fwl_verify` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_free(v: *mut VerdictHandle) {
    if !v.is_null() {
        drop(Box::from_raw(v as *mut VerdictInner));
    }
}

/// True when the property holds (the run printed no counterexample).
///
/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_passed(v: *const VerdictHandle) -> bool {
    verdict_ref(v).is_some_and(|i| i.verdict.status == VerdictStatus::Successful)
}

/// Canonical name of the verified property. Owned by the verdict handle.
///
/// # Safety
/// `v` must be a live verdict handle; the string is valid until the handle
/// is freed.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_property(v: *const VerdictHandle) -> *const c_char {
    verdict_ref(v).map_or(std::ptr::null(), |i| i.property.as_ptr())
}

/// Completeness claim of the run, e.g. `exhaustive to bound 8` or
/// `bounded, sampled`. Owned by the verdict handle.
///
/// # Safety
/// `v` must be a live verdict handle; the string is valid until the handle
/// is freed.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_label(v: *const VerdictHandle) -> *const c_char {
    verdict_ref(v).map_or(std::ptr::null(), |i| i.label.as_ptr())
}

/// Number of candidates in (exhaustive) or drawn from (random) the search
/// space; 1 for analytic checks. Saturates at `UINT64_MAX`.
///
/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_candidates(v: *const VerdictHandle) -> u64 {
    verdict_ref(v).map_or(0, |i| i.verdict.stats.candidates.min(u64::MAX as u128) as u64)
}

/// Simulator steps executed by the search (informational).
///
/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_steps(v: *const VerdictHandle) -> u64 {
    verdict_ref(v).map_or(0, |i| i.verdict.stats.steps)
}

/// Wall-clock milliseconds the decision took.
///
/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_wall_ms(v: *const VerdictHandle) -> u64 {
    verdict_ref(v).map_or(0, |i| i.verdict.stats.wall_ms)
}

/// The counterexample as pretty-printed JSON, or null when the property
/// holds. The returned string is owned by the caller: release it with
/// `fwl_string_free`.
///
/// # Safety
/// `v` must be a live verdict handle.
#[no_mangle]
pub unsafe extern "C" fn fwl_verdict_counterexample_json(
    v: *const VerdictHandle,
) -> *mut c_char {
    let Some(inner) = verdict_ref(v) else {
        return std::ptr::null_mut();
    };
    match &inner.verdict.counterexample {
        Some(ce) => CString::new(ce.to_json())
            .map(CString::into_raw)
            .unwrap_or(std::ptr::null_mut()),
        None => std::ptr::null_mut(),
    }
}

/// Re-executes a counterexample document. On success stores true in
/// `*confirmed` when the recorded violation recurred bit-for-bit and false
/// when the evidence was refuted.
///
/// # Safety
/// `ce_json` must be a valid NUL-terminated string; `confirmed` must be a
/// valid location to store a bool.
#[no_mangle]
pub unsafe extern "C" fn fwl_replay_json(
    ce_json: *const c_char,
    confirmed: *mut bool,
) -> FwlStatus {
    clear_error();
    if confirmed.is_null() {
        return fail(FwlStatus::NullPointer, "confirmed out-pointer is null");
    }
    *confirmed = false;
    let json = match str_arg(ce_json) {
        Ok(j) => j,
        Err(s) => return s,
    };
    let ce = match Counterexample::from_json(json) {
        Ok(ce) => ce,
        Err(e) => {
            let status = match &e {
                CeError::Unreplayable(_) => FwlStatus::Replay,
                _ => FwlStatus::BadDocument,
            };
            return fail(status, e);
        }
    };
    let result = catch_unwind(AssertUnwindSafe(|| ce.replay()));
    match result {
        Ok(Ok(report)) => {
            *confirmed = report.confirmed;
            set_error(report.detail);
            FwlStatus::Ok
        }
        Ok(Err(e)) => {
            let status = match &e {
                CeError::Unreplayable(_) => FwlStatus::Replay,
                _ => FwlStatus::BadDocument,
            };
            fail(status, e)
        }
        Err(_) => fail(FwlStatus::Panic, "internal panic during replay"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn last_error_string() -> String {
        CStr::from_ptr(fwl_last_error()).to_string_lossy().into_owned()
    }

    const EQ1: &str = r#"{
        "type": "tf",
        "num": [1.0, -2.819, 2.637, -0.8187],
        "den": [1.0, -1.97, 1.033, -0.06068],
        "ts": 0.001
    }"#;

    #[test]
    fn stability_lifecycle_both_verdicts() {
        unsafe {
            let sys = cstr(EQ1);
            let prop = cstr("stability");

            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 2, 13);
            assert!(!task.is_null(), "{}", last_error_string());
            assert_eq!(fwl_task_set_dynamic_range(task, -1.0, 1.0), FwlStatus::Ok);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Ok);
            assert!(fwl_verdict_passed(verdict));
            assert!(fwl_verdict_counterexample_json(verdict).is_null());
            assert_eq!(
                CStr::from_ptr(fwl_verdict_property(verdict)).to_str().unwrap(),
                "stability"
            );
            assert_eq!(
                CStr::from_ptr(fwl_verdict_label(verdict)).to_str().unwrap(),
                "complete"
            );
            assert_eq!(fwl_verdict_candidates(verdict), 1);
            fwl_verdict_free(verdict);
            fwl_task_free(task);

            // The coarse format fails and yields a replayable document.
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 12, 3);
            assert!(!task.is_null());
            assert_eq!(fwl_task_set_dynamic_range(task, -1.0, 1.0), FwlStatus::Ok);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Ok);
            assert!(!fwl_verdict_passed(verdict));
            let ce = fwl_verdict_counterexample_json(verdict);
            assert!(!ce.is_null());
            let mut confirmed = false;
            assert_eq!(fwl_replay_json(ce, &mut confirmed), FwlStatus::Ok);
            assert!(confirmed);
            fwl_string_free(ce);
            fwl_verdict_free(verdict);
            fwl_task_free(task);
        }
    }

    #[test]
    fn bounded_property_with_full_configuration() {
        unsafe {
            let sys = cstr(r#"{"type":"tf","num":[1.0],"den":[1.0,-1.0],"ts":0.001}"#);
            let prop = cstr("limit-cycle");
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 2, 4);
            assert!(!task.is_null());
            assert_eq!(fwl_task_set_dynamic_range(task, -1.0, 1.0), FwlStatus::Ok);
            assert_eq!(fwl_task_set_bound(task, 8), FwlStatus::Ok);
            assert_eq!(
                fwl_task_set_engine(task, FwlEngineMode::Exhaustive, 0, 0),
                FwlStatus::Ok
            );
            let delta = 0.25f64;
            assert_eq!(
                fwl_task_set_realization(task, FwlRealization::Ddfi, &delta),
                FwlStatus::Ok
            );
            // Delta parameter on a shift form is rejected.
            assert_eq!(
                fwl_task_set_realization(task, FwlRealization::Dfi, &delta),
                FwlStatus::BadTask
            );
            assert_eq!(
                fwl_task_set_realization(task, FwlRealization::Dfi, std::ptr::null()),
                FwlStatus::Ok
            );
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Ok);
            assert!(!fwl_verdict_passed(verdict));
            let ce = fwl_verdict_counterexample_json(verdict);
            let mut confirmed = false;
            assert_eq!(fwl_replay_json(ce, &mut confirmed), FwlStatus::Ok);
            assert!(confirmed);
            fwl_string_free(ce);
            fwl_verdict_free(verdict);
            fwl_task_free(task);
        }
    }

    #[test]
    fn error_paths_report_status_and_message() {
        unsafe {
            let sys = cstr(EQ1);
            // Unknown property.
            let bad = cstr("jitter");
            assert!(fwl_task_new(sys.as_ptr(), bad.as_ptr(), 2, 13).is_null());
            assert!(last_error_string().contains("unknown property"));
            // Bad JSON.
            let garbage = cstr("{");
            let prop = cstr("stability");
            assert!(fwl_task_new(garbage.as_ptr(), prop.as_ptr(), 2, 13).is_null());
            // Bad format (width 0).
            assert!(fwl_task_new(sys.as_ptr(), prop.as_ptr(), 0, 0).is_null());
            // Null arguments.
            assert!(fwl_task_new(std::ptr::null(), prop.as_ptr(), 2, 13).is_null());
            let mut verdict = std::ptr::null_mut();
            assert_eq!(
                fwl_verify(std::ptr::null(), &mut verdict),
                FwlStatus::NullPointer
            );
            // Missing bound on a bounded property surfaces as BadTask.
            let prop = cstr("overflow");
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 2, 13);
            assert!(!task.is_null());
            assert_eq!(fwl_task_set_dynamic_range(task, -1.0, 1.0), FwlStatus::Ok);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::BadTask);
            assert!(verdict.is_null());
            assert!(!last_error_string().is_empty());
            fwl_task_free(task);
            // Incompatible property/system pair.
            let prop = cstr("ss-stability");
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 2, 13);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::BadTask);
            fwl_task_free(task);
        }
    }

    #[test]
    fn budget_overrun_is_an_engine_error_and_random_mode_recovers() {
        unsafe {
            let sys = cstr(EQ1);
            let prop = cstr("overflow");
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 2, 13);
            assert_eq!(fwl_task_set_dynamic_range(task, -1.0, 1.0), FwlStatus::Ok);
            assert_eq!(fwl_task_set_bound(task, 4), FwlStatus::Ok);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Engine);
            assert!(last_error_string().contains("exceeds the budget"));
            assert_eq!(
                fwl_task_set_engine(task, FwlEngineMode::Random, 2000, 7),
                FwlStatus::Ok
            );
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Ok);
            // The wrapped numerator overflows almost immediately, so
            // sampling finds a violation.
            assert!(!fwl_verdict_passed(verdict));
            fwl_verdict_free(verdict);
            fwl_task_free(task);
        }
    }

    #[test]
    fn replay_rejects_tampered_documents_without_confirming() {
        unsafe {
            let sys = cstr(EQ1);
            let prop = cstr("stability");
            let task = fwl_task_new(sys.as_ptr(), prop.as_ptr(), 12, 3);
            let mut verdict = std::ptr::null_mut();
            assert_eq!(fwl_verify(task, &mut verdict), FwlStatus::Ok);
            let ce = fwl_verdict_counterexample_json(verdict);
            let text = CStr::from_ptr(ce).to_str().unwrap().to_string();
            // Claim a different witness: the replay must refute it.
            let tampered = text.replace("1.3090169943749475", "1.01");
            let tampered_c = cstr(&tampered);
            let mut confirmed = true;
            assert_eq!(fwl_replay_json(tampered_c.as_ptr(), &mut confirmed), FwlStatus::Ok);
            assert!(!confirmed);
            // Structurally broken JSON is a document error.
            let broken = cstr("not json");
            assert_eq!(
                fwl_replay_json(broken.as_ptr(), &mut confirmed),
                FwlStatus::BadDocument
            );
            fwl_string_free(ce);
            fwl_verdict_free(verdict);
            fwl_task_free(task);
        }
    }

    #[test]
    fn version_is_a_nul_terminated_semver() {
        unsafe {
            let v = CStr::from_ptr(fwl_version()).to_str().unwrap();
            assert_eq!(v, env!("CARGO_PKG_VERSION"));
        }
    }
}
