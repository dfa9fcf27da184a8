//! C interface. Every function returns a [`PwStatus`]; on failure the
//! message is available from [`pw_last_error`] on the same thread. Strings
//! returned through out-parameters are owned by the caller and released
//! with [`pw_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use patchwork::geometry::{make_chair, make_grid, make_qp};
use patchwork::groups::dist_rigid;
use patchwork::io::{emit_canonical, parse_coloring, parse_pattern, parse_tiling};
use patchwork::metric::{tiling_distance, DistanceOptions};
use patchwork::ramsey::brown_search;
use patchwork::recurrence::{bt_search, BtOptions};
use patchwork::{Action, Error, GroupElement, Point, ThetaFn, TilingSource};

/// Opaque tiling handle.
pub struct PwTiling(TilingSource);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PwStatus {
    Ok = 0,
    InputError = 1,
    NotFound = 2,
    NullPointer = 3,
    Panic = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn from_error(e: &Error) -> PwStatus {
    set_error(&e.to_string());
    if e.exit_code() == 2 {
        PwStatus::NotFound
    } else {
        PwStatus::InputError
    }
}

/// Runs `f`, turning panics and errors into status codes.
fn guard(f: impl FnOnce() -> Result<PwStatus, PwStatus>) -> PwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) | Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            PwStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, PwStatus> {
    if p.is_null() {
        set_error("null string argument");
        return Err(PwStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8");
        PwStatus::InputError
    })
}

fn lift<T>(r: patchwork::Result<T>) -> Result<T, PwStatus> {
    r.map_err(|e| from_error(&e))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<PwStatus, PwStatus> {
    let c = CString::new(s).map_err(|_| PwStatus::InputError)?;
    *out = c.into_raw();
    Ok(PwStatus::Ok)
}

fn check_out<T>(p: *mut T) -> Result<(), PwStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(PwStatus::NullPointer);
    }
    Ok(())
}

fn boxed(src: TilingSource) -> *mut PwTiling {
    Box::into_raw(Box::new(PwTiling(src)))
}

/// Message of the last failure on this thread; valid until the next call.
#[no_mangle]
pub extern "C" fn pw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn pw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a tiling document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_tiling_from_json(json: *const c_char, out: *mut *mut PwTiling) -> PwStatus {
    guard(|| {
        check_out(out)?;
        let src = lift(parse_tiling(text(json)?))?;
        *out = boxed(src);
        Ok(PwStatus::Ok)
    })
}

/// Built-in tiling: `grid`, `chair` (with `levels`) or `qp`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_tiling_fixture(name: *const c_char, levels: u32, out: *mut *mut PwTiling) -> PwStatus {
    guard(|| {
        check_out(out)?;
        let src = match text(name)? {
            "grid" => make_grid(),
            "chair" => make_chair(levels),
            "qp" => lift(make_qp(&[Point::ORIGIN]))?,
            other => {
                set_error(&format!("unknown fixture `{other}`"));
                return Err(PwStatus::InputError);
            }
        };
        *out = boxed(src);
        Ok(PwStatus::Ok)
    })
}

/// # Safety
/// `t` must come from this library or be null; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn pw_tiling_free(t: *mut PwTiling) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Distance interval between two tilings.
///
/// # Safety
/// Handles must be live; strings NUL-terminated; `lo` and `hi` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_tiling_distance(
    x: *const PwTiling,
    y: *const PwTiling,
    action: *const c_char,
    theta: *const c_char,
    lo: *mut f64,
    hi: *mut f64,
) -> PwStatus {
    guard(|| {
        check_out(lo)?;
        check_out(hi)?;
        let (Some(x), Some(y)) = (x.as_ref(), y.as_ref()) else {
            set_error("null tiling handle");
            return Err(PwStatus::NullPointer);
        };
        let action = lift(Action::parse(text(action)?))?;
        let theta = lift(ThetaFn::by_name(text(theta)?))?;
        let d = lift(tiling_distance(&x.0, &y.0, &action, &theta, &DistanceOptions::default()))?;
        *lo = d.lo;
        *hi = d.hi;
        Ok(PwStatus::Ok)
    })
}

/// BT search; the certificate is written as JSON to `out_json`.
///
/// # Safety
/// `y` must be live, `lambdas` must point to `n_lambdas` values, strings
/// NUL-terminated and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_bt_search(
    y: *const PwTiling,
    pattern_json: *const c_char,
    eps: f64,
    lambdas: *const f64,
    n_lambdas: usize,
    action: *const c_char,
    q_max: u32,
    out_json: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        check_out(out_json)?;
        let Some(y) = y.as_ref() else {
            set_error("null tiling handle");
            return Err(PwStatus::NullPointer);
        };
        if lambdas.is_null() && n_lambdas > 0 {
            set_error("null lambda array");
            return Err(PwStatus::NullPointer);
        }
        let ls = if n_lambdas == 0 { &[][..] } else { std::slice::from_raw_parts(lambdas, n_lambdas) };
        let f = lift(parse_pattern(text(pattern_json)?))?;
        let action = lift(Action::parse(text(action)?))?;
        let cert = lift(bt_search(&y.0, &f, eps, ls, &action, &BtOptions { q_max, window_r: None }))?;
        write_string(out_json, lift(emit_canonical(&cert))?)
    })
}

/// Brown search on a coloring document; pattern is `{"points":[[..],..]}`
/// with integer coordinates. Returns `NotFound` when no certificate exists
/// up to `q_max`.
///
/// # Safety
/// Strings must be NUL-terminated and `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn pw_brown_search(
    coloring_json: *const c_char,
    pattern_json: *const c_char,
    k: i64,
    q_max: u32,
    out_json: *mut *mut c_char,
) -> PwStatus {
    guard(|| {
        check_out(out_json)?;
        let c = lift(parse_coloring(text(coloring_json)?))?;
        let doc: serde_json::Value = serde_json::from_str(text(pattern_json)?).map_err(|e| {
            set_error(&e.to_string());
            PwStatus::InputError
        })?;
        let points: Vec<Vec<i64>> = serde_json::from_value(doc["points"].clone()).map_err(|e| {
            set_error(&format!("field `points`: {e}"));
            PwStatus::InputError
        })?;
        match lift(brown_search(&c, &points, k, q_max))? {
            Some(cert) => write_string(out_json, lift(emit_canonical(&cert))?),
            None => {
                *out_json = ptr::null_mut();
                set_error(&format!("no certificate with q <= {q_max}"));
                Ok(PwStatus::NotFound)
            }
        }
    })
}

/// Right-invariant distance between two rigid motions `p -> R(angle) p + v`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pw_dist_rigid(
    g_angle: f64,
    g_x: f64,
    g_y: f64,
    h_angle: f64,
    h_x: f64,
    h_y: f64,
    out: *mut f64,
) -> PwStatus {
    guard(|| {
        check_out(out)?;
        let g = GroupElement::rigid(g_angle, Point::new(g_x, g_y));
        let h = GroupElement::rigid(h_angle, Point::new(h_x, h_y));
        *out = lift(dist_rigid(&g, &h))?;
        Ok(PwStatus::Ok)
    })
}
