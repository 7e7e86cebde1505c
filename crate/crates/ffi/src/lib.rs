//! C ABI over the `stieltjes` library.
//!
//! Functions are opaque handles created from a JSON spec and released with
//! [`stieltjes_function_free`]. Every fallible call returns a
//! [`StieltjesStatus`]; on failure the message is available from
//! [`stieltjes_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use stieltjes::integrator::{
    decide_riemann_integrable, integrate_rs_reduced, Controls, IntegrabilityVerdict,
    DEFAULT_BUDGET, DEFAULT_TOL,
};
use stieltjes::numeric::DEFAULT_SLACK;
use stieltjes::{Error, FunctionHandle, FunctionSpec, Interval};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StieltjesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidSpec = 3,
    InvalidArgument = 4,
    OutOfDomain = 5,
    NotPointwise = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StieltjesVerdictKind {
    Integrable = 0,
    NotIntegrable = 1,
    Undecided = 2,
}

/// Outcome of a decision or integration. `mid`/`rad` are set for
/// integrable and undecided verdicts, `gap_floor` for not-integrable ones,
/// `best_gap`/`budget_spent` for undecided ones; unused fields are 0.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesVerdict {
    pub kind: StieltjesVerdictKind,
    pub mid: f64,
    pub rad: f64,
    pub gap_floor: f64,
    pub best_gap: f64,
    pub budget_spent: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StieltjesControls {
    pub tol: f64,
    pub budget: usize,
    pub slack: f64,
}

/// Opaque function handle.
pub struct StieltjesFunction {
    handle: FunctionHandle,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn fail(status: StieltjesStatus, msg: impl Into<String>) -> StieltjesStatus {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> StieltjesStatus {
    match e {
        Error::Spec { .. } | Error::Json(_) => StieltjesStatus::InvalidSpec,
        Error::OutOfDomain { .. } | Error::DomainMismatch(..) => StieltjesStatus::OutOfDomain,
        Error::NotPointwise(_) => StieltjesStatus::NotPointwise,
        Error::Io(_) => StieltjesStatus::Internal,
        _ => StieltjesStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (StieltjesStatus, String)>) -> StieltjesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            StieltjesStatus::Ok
        }
        Ok(Err((status, msg))) => fail(status, msg),
        Err(_) => fail(StieltjesStatus::Internal, "internal panic"),
    }
}

fn lib(e: Error) -> (StieltjesStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (StieltjesStatus, String) {
    (StieltjesStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a>(
    p: *const StieltjesFunction,
    what: &str,
) -> Result<&'a FunctionHandle, (StieltjesStatus, String)> {
    // SAFETY: the caller passes a pointer obtained from stieltjes_function_new
    // that has not been freed, or null.
    unsafe { p.as_ref() }
        .map(|f| &f.handle)
        .ok_or_else(|| null(what))
}

fn controls(p: *const StieltjesControls) -> Result<Controls, (StieltjesStatus, String)> {
    // SAFETY: null or a valid pointer supplied by the caller.
    let c = match unsafe { p.as_ref() } {
        None => Controls::default(),
        Some(c) => Controls {
            tol: c.tol,
            budget: c.budget,
            slack: c.slack,
        },
    };
    c.validate().map_err(lib)?;
    Ok(c)
}

fn write_verdict(
    v: &IntegrabilityVerdict,
    out: *mut StieltjesVerdict,
) -> Result<(), (StieltjesStatus, String)> {
    let mut r = StieltjesVerdict {
        kind: StieltjesVerdictKind::Integrable,
        mid: 0.0,
        rad: 0.0,
        gap_floor: 0.0,
        best_gap: 0.0,
        budget_spent: 0,
    };
    if let Some(e) = v.enclosure() {
        r.mid = e.mid;
        r.rad = e.rad;
    }
    match v {
        IntegrabilityVerdict::Integrable(_) => {}
        IntegrabilityVerdict::NotIntegrable(n) => {
            r.kind = StieltjesVerdictKind::NotIntegrable;
            r.gap_floor = n.gap_floor;
        }
        IntegrabilityVerdict::Undecided(u) => {
            r.kind = StieltjesVerdictKind::Undecided;
            r.best_gap = u.best_gap;
            r.budget_spent = u.budget_spent;
        }
    }
    // SAFETY: checked non-null by the caller of this helper.
    unsafe { out.write(r) };
    Ok(())
}

/// Default tolerance, budget and slack.
#[no_mangle]
pub extern "C" fn stieltjes_default_controls() -> StieltjesControls {
    StieltjesControls {
        tol: DEFAULT_TOL,
        budget: DEFAULT_BUDGET,
        slack: DEFAULT_SLACK,
    }
}

/// Build a function from a NUL-terminated JSON spec on `[lo, hi]`.
///
/// # Safety
/// `spec_json` must be null or a valid C string; `out` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_function_new(
    spec_json: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut *mut StieltjesFunction,
) -> StieltjesStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if spec_json.is_null() {
            return Err(null("spec_json"));
        }
        // SAFETY: non-null C string per the contract.
        let text = unsafe { CStr::from_ptr(spec_json) }
            .to_str()
            .map_err(|e| (StieltjesStatus::InvalidUtf8, e.to_string()))?;
        let domain = Interval::domain(lo, hi).map_err(lib)?;
        let handle = FunctionSpec::from_json(text)
            .and_then(|s| s.build(domain))
            .map_err(lib)?;
        let boxed = Box::into_raw(Box::new(StieltjesFunction { handle }));
        // SAFETY: `out` is non-null and writable.
        unsafe { out.write(boxed) };
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `f` must be null or a handle from [`stieltjes_function_new`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_function_free(f: *mut StieltjesFunction) {
    if !f.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(f) });
    }
}

/// Value at `x`; on dense-oscillation pieces the off-value.
///
/// # Safety
/// `f` must be a live handle or null; `out` writable or null.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_eval(
    f: *const StieltjesFunction,
    x: f64,
    out: *mut f64,
) -> StieltjesStatus {
    guard(|| {
        // SAFETY: per the contract.
        let h = unsafe { handle(f, "f") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        if !h.domain().contains(x) {
            return Err((
                StieltjesStatus::OutOfDomain,
                format!("point {x} lies outside the domain {}", h.domain()),
            ));
        }
        // SAFETY: non-null and writable.
        unsafe { out.write(h.eval(x)) };
        Ok(())
    })
}

/// Exact infimum and supremum over `[lo, hi]`, which must lie in the domain.
///
/// # Safety
/// `f` must be a live handle or null; `inf`, `sup` writable or null.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_range(
    f: *const StieltjesFunction,
    lo: f64,
    hi: f64,
    inf: *mut f64,
    sup: *mut f64,
) -> StieltjesStatus {
    guard(|| {
        // SAFETY: per the contract.
        let h = unsafe { handle(f, "f") }?;
        if inf.is_null() || sup.is_null() {
            return Err(null("inf/sup"));
        }
        let iv = Interval::new(lo, hi).map_err(lib)?;
        if !h.domain().contains_interval(&iv) {
            return Err((
                StieltjesStatus::OutOfDomain,
                format!("interval {iv} lies outside the domain {}", h.domain()),
            ));
        }
        let (a, b) = h.range(&iv);
        // SAFETY: non-null and writable.
        unsafe {
            inf.write(a);
            sup.write(b);
        }
        Ok(())
    })
}

/// Decide Riemann integrability of `h`. `controls` may be null for the
/// defaults.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_decide(
    h: *const StieltjesFunction,
    controls_ptr: *const StieltjesControls,
    out: *mut StieltjesVerdict,
) -> StieltjesStatus {
    guard(|| {
        // SAFETY: per the contract.
        let h = unsafe { handle(h, "h") }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = controls(controls_ptr)?;
        let v = decide_riemann_integrable(h, &c).map_err(lib)?;
        write_verdict(&v, out)
    })
}

/// Enclose `∫ f dG` with `G = c + ∫ g` through the integral of `f·g`.
///
/// # Safety
/// Pointers must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_integrate_rs(
    f: *const StieltjesFunction,
    g: *const StieltjesFunction,
    c: f64,
    controls_ptr: *const StieltjesControls,
    out: *mut StieltjesVerdict,
) -> StieltjesStatus {
    guard(|| {
        // SAFETY: per the contract.
        let (f, g) = unsafe { (handle(f, "f")?, handle(g, "g")?) };
        if out.is_null() {
            return Err(null("out"));
        }
        let ctl = controls(controls_ptr)?;
        let v = integrate_rs_reduced(f, g, c, &ctl).map_err(lib)?;
        write_verdict(&v, out)
    })
}

/// Run the built-in verification corpus.
///
/// # Safety
/// `passed` and `failed` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_verify_default(
    seed: u64,
    passed: *mut usize,
    failed: *mut usize,
) -> StieltjesStatus {
    guard(|| {
        if passed.is_null() || failed.is_null() {
            return Err(null("passed/failed"));
        }
        let s = stieltjes::harness::run_default(seed);
        // SAFETY: non-null and writable.
        unsafe {
            passed.write(s.passed);
            failed.write(s.failed);
        }
        Ok(())
    })
}

/// Copy the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length plus one, or 0 if
/// there is no error.
///
/// # Safety
/// `buf` must be null or writable for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn stieltjes_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = (bytes.len() - 1).min(len - 1);
            // SAFETY: `buf` is writable for `len >= n + 1` bytes.
            unsafe {
                ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
                buf.add(n).write(0);
            }
        }
        bytes.len()
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn stieltjes_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
